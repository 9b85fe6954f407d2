//! Line-oriented `key = value` job configuration with a canonical echo.

use crate::arith::ring::Rat;
use crate::error::{Error, Result};
use crate::field::parse_rat;
use std::collections::BTreeMap;
use std::fmt::Write;

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_FACTOR_DEGREE: usize = 24;

/// A prime ideal `(p, a)` with `a` in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSpec {
    pub p: u64,
    pub element: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Explicit { a: Vec<Rat>, b: Vec<Rat> },
    /// Search for `(a, b | F)` ramified at the given finite primes and at all
    /// real places but the split one.
    Auto { ramified: Vec<PrimeSpec> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub poly: Vec<i64>,
    /// `places.order[i]` is the ascending index of the root defining `v_{i+1}`.
    pub places_order: Option<Vec<usize>>,
    pub split_index: Option<usize>,
    pub algebra: AlgebraSpec,
    /// Generators of the level, in power-basis coordinates; empty means `(1)`.
    pub level: Vec<Vec<Rat>>,
    pub weight: Vec<u32>,
    pub norm_bound: Option<u64>,
    pub prime_list: Vec<PrimeSpec>,
    pub precision_bits: u32,
    pub unit_height: Option<u64>,
    pub enum_bound: Option<f64>,
    pub factor_degree: usize,
    pub output_path: Option<String>,
    pub svg_path: Option<String>,
}

const KEYS: &[&str] = &[
    "field.poly",
    "places.order",
    "places.split_index",
    "algebra.auto",
    "algebra.a",
    "algebra.b",
    "algebra.ramified",
    "level.generators",
    "weight",
    "primes.norm_bound",
    "primes.list",
    "precision.bits",
    "bounds.unit_height",
    "bounds.enum",
    "bounds.factor_degree",
    "output.path",
    "svg.path",
];

fn bad(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {msg}"))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| x.trim().parse::<T>().map_err(|_| bad(key, format!("cannot parse `{}`", x.trim())))).collect()
}

fn rats(key: &str, v: &str) -> Result<Vec<Rat>> {
    if v.trim().is_empty() {
        return Err(bad(key, "empty coordinate vector"));
    }
    v.split(',').map(|x| parse_rat(x.trim()).ok_or_else(|| bad(key, format!("cannot parse `{}`", x.trim())))).collect()
}

fn primes(key: &str, v: &str) -> Result<Vec<PrimeSpec>> {
    let mut out = Vec::new();
    for item in v.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, a) = item.split_once(':').ok_or_else(|| bad(key, format!("expected `p:coords`, got `{item}`")))?;
        let p = p.trim().parse().map_err(|_| bad(key, format!("bad rational prime `{p}`")))?;
        out.push(PrimeSpec { p, element: rats(key, a)? });
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| bad(key, format!("cannot parse `{}`", v.trim())))
}

fn fmt_rats(v: &[Rat]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_primes(v: &[PrimeSpec]) -> String {
    v.iter().map(|p| format!("{}:{}", p.p, fmt_rats(&p.element))).collect::<Vec<_>>().join(";")
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<JobConfig> {
        let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", n + 1)));
            }
            if kv.insert(k, v.trim()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        let get = |k: &str| kv.get(k).copied();
        let poly: Vec<i64> = list("field.poly", get("field.poly").ok_or_else(|| bad("field.poly", "missing"))?)?;
        if poly.len() < 2 {
            return Err(bad("field.poly", "need a polynomial of positive degree"));
        }
        let n = poly.len() - 1;
        let places_order = get("places.order").map(|v| list("places.order", v)).transpose()?;
        let split_index = get("places.split_index").map(|v| number("places.split_index", v)).transpose()?;
        if let Some(s) = split_index {
            if s >= n {
                return Err(bad("places.split_index", format!("{s} is not a place index below {n}")));
            }
        }
        let auto = get("algebra.auto").map(|v| number::<bool>("algebra.auto", v)).transpose()?.unwrap_or(false);
        let algebra = if auto {
            if get("algebra.a").is_some() || get("algebra.b").is_some() {
                return Err(bad("algebra.auto", "cannot be combined with algebra.a or algebra.b"));
            }
            AlgebraSpec::Auto { ramified: primes("algebra.ramified", get("algebra.ramified").unwrap_or(""))? }
        } else {
            if get("algebra.ramified").is_some() {
                return Err(bad("algebra.ramified", "requires algebra.auto = true"));
            }
            let a = rats("algebra.a", get("algebra.a").ok_or_else(|| bad("algebra.a", "missing"))?)?;
            let b = rats("algebra.b", get("algebra.b").ok_or_else(|| bad("algebra.b", "missing"))?)?;
            AlgebraSpec::Explicit { a, b }
        };
        let level = get("level.generators")
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|g| rats("level.generators", g))
            .collect::<Result<Vec<_>>>()?;
        let weight: Vec<u32> = match get("weight") {
            Some(v) => list("weight", v)?,
            None => vec![2; n],
        };
        if weight.len() != n {
            return Err(bad("weight", format!("expected {n} entries, got {}", weight.len())));
        }
        if weight.iter().any(|&k| k == 0 || k % 2 == 1) {
            return Err(bad("weight", "entries must be even and positive"));
        }
        let config = JobConfig {
            poly,
            places_order,
            split_index,
            algebra,
            level,
            weight,
            norm_bound: get("primes.norm_bound").map(|v| number("primes.norm_bound", v)).transpose()?,
            prime_list: primes("primes.list", get("primes.list").unwrap_or(""))?,
            precision_bits: get("precision.bits").map(|v| number("precision.bits", v)).transpose()?.unwrap_or(DEFAULT_PRECISION_BITS),
            unit_height: get("bounds.unit_height").map(|v| number("bounds.unit_height", v)).transpose()?,
            enum_bound: get("bounds.enum").map(|v| number("bounds.enum", v)).transpose()?,
            factor_degree: get("bounds.factor_degree").map(|v| number("bounds.factor_degree", v)).transpose()?.unwrap_or(DEFAULT_FACTOR_DEGREE),
            output_path: get("output.path").map(str::to_string),
            svg_path: get("svg.path").map(str::to_string),
        };
        if let Some(b) = config.enum_bound {
            if !(b.is_finite() && b > 0.0) {
                return Err(bad("bounds.enum", "must be positive"));
            }
        }
        Ok(config)
    }

    /// Canonical text: fixed key order, optional keys only when set.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("field.poly", fmt_list(&self.poly));
        if let Some(p) = &self.places_order {
            put("places.order", fmt_list(p));
        }
        if let Some(i) = self.split_index {
            put("places.split_index", i.to_string());
        }
        match &self.algebra {
            AlgebraSpec::Explicit { a, b } => {
                put("algebra.a", fmt_rats(a));
                put("algebra.b", fmt_rats(b));
            }
            AlgebraSpec::Auto { ramified } => {
                put("algebra.auto", "true".into());
                put("algebra.ramified", fmt_primes(ramified));
            }
        }
        put("level.generators", self.level.iter().map(|g| fmt_rats(g)).collect::<Vec<_>>().join(";"));
        put("weight", fmt_list(&self.weight));
        if let Some(b) = self.norm_bound {
            put("primes.norm_bound", b.to_string());
        }
        if !self.prime_list.is_empty() {
            put("primes.list", fmt_primes(&self.prime_list));
        }
        put("precision.bits", self.precision_bits.to_string());
        if let Some(h) = self.unit_height {
            put("bounds.unit_height", h.to_string());
        }
        if let Some(b) = self.enum_bound {
            put("bounds.enum", format!("{b:?}"));
        }
        put("bounds.factor_degree", self.factor_degree.to_string());
        if let Some(p) = &self.output_path {
            put("output.path", p.clone());
        }
        if let Some(p) = &self.svg_path {
            put("svg.path", p.clone());
        }
        s
    }

    /// Text identifying the prime-independent stages.
    pub fn geometry_key(&self) -> String {
        let mut c = self.clone();
        c.norm_bound = None;
        c.prime_list.clear();
        c.factor_degree = DEFAULT_FACTOR_DEGREE;
        c.output_path = None;
        c.svg_path = None;
        c.emit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "field.poly = -11,-11,0,1\nplaces.order = 2,1,0\nalgebra.a = 1,1\nalgebra.b = -1\nweight = 2,2,2\nprimes.norm_bound = 49\n";

    #[test]
    fn round_trip() {
        let c = JobConfig::parse(CUBIC).unwrap();
        assert_eq!(c.poly, vec![-11, -11, 0, 1]);
        assert_eq!(c.precision_bits, DEFAULT_PRECISION_BITS);
        assert_eq!(JobConfig::parse(&c.emit()).unwrap(), c);
        assert_eq!(JobConfig::parse(&c.emit()).unwrap().emit(), c.emit());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(JobConfig::parse("field.poly = 1\n").is_err());
        assert!(JobConfig::parse(&format!("{CUBIC}weight = 2,2,2\n")).is_err());
        assert!(JobConfig::parse(&CUBIC.replace("weight = 2,2,2", "weight = 2,3,2")).is_err());
        assert!(JobConfig::parse(&format!("{CUBIC}colour = red\n")).is_err());
        assert!(JobConfig::parse(&CUBIC.replace("algebra.b = -1\n", "")).is_err());
    }
}
