//! The result document: canonical `key = value` text and sorted JSON.

use crate::arith::ring::Rat;
use crate::error::Result;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComponentSummary {
    pub class_index: usize,
    pub representative: String,
    pub signature: String,
    pub genus: u32,
    pub elliptic_orders: Vec<u32>,
    pub sides: usize,
    pub generators: usize,
    pub area: String,
    pub dim_h1: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OperatorSummary {
    pub label: String,
    pub kind: String,
    pub norm: u64,
    /// A generator of the prime when it is principal.
    pub generator: Option<String>,
    pub class: usize,
    pub char_poly_h: String,
    pub char_poly_plus: String,
    pub factorization_plus: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EigenvalueEntry {
    pub label: String,
    pub norm: u64,
    pub generator: Option<String>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SystemSummary {
    pub dimension: usize,
    pub field_poly: String,
    pub generator: String,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub atkin_lehner: Vec<EigenvalueEntry>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PieceSummary {
    pub dimension: usize,
    pub field_poly: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ResultDocument {
    pub config: String,
    pub field_degree: usize,
    pub field_discriminant: String,
    pub split_place: usize,
    pub strict_class_number: usize,
    pub algebra_discriminant: String,
    pub ramified_primes: Vec<String>,
    pub level: String,
    pub weight: Vec<u32>,
    pub coefficient_field: String,
    pub components: Vec<ComponentSummary>,
    pub dim_h: usize,
    pub dim_h_plus: usize,
    pub conjugation: OperatorSummary,
    pub operators: Vec<OperatorSummary>,
    pub skipped_primes: Vec<String>,
    pub decomposition: Vec<usize>,
    pub systems: Vec<SystemSummary>,
    pub component_decomposition: Vec<PieceSummary>,
    pub diagnostics: BTreeMap<String, String>,
    pub timing_ms: BTreeMap<String, u64>,
}

/// `p(T)` in descending powers with exact coefficients.
pub fn format_poly(p: &[Rat], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let a = c.abs();
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let body = if k == 0 {
            a.to_string()
        } else if a.is_one() {
            mono
        } else {
            format!("{a}*{mono}")
        };
        if out.is_empty() {
            out = if sign == "-" { format!("-{body}") } else { body };
        } else {
            let _ = write!(out, " {sign} {body}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn format_factorization(f: &[(Vec<Rat>, usize)], var: &str) -> String {
    f.iter()
        .map(|(p, e)| if *e == 1 { format!("({})", format_poly(p, var)) } else { format!("({})^{e}", format_poly(p, var)) })
        .collect::<Vec<_>>()
        .join("*")
}

fn opt(s: &Option<String>) -> String {
    s.clone().unwrap_or_else(|| "-".into())
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ResultDocument {
    /// The document with timing fields cleared.
    pub fn without_timing(&self) -> ResultDocument {
        ResultDocument { timing_ms: BTreeMap::new(), ..self.clone() }
    }

    /// Flat `(key, value)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut e: Vec<(String, String)> = Vec::new();
        let mut put = |k: String, v: String| e.push((k, v));
        for line in self.config.lines() {
            if let Some((k, v)) = line.split_once(" = ") {
                put(format!("config.{k}"), v.to_string());
            }
        }
        put("field.degree".into(), self.field_degree.to_string());
        put("field.discriminant".into(), self.field_discriminant.clone());
        put("field.split_place".into(), self.split_place.to_string());
        put("field.strict_class_number".into(), self.strict_class_number.to_string());
        put("algebra.discriminant".into(), self.algebra_discriminant.clone());
        put("algebra.ramified_primes".into(), self.ramified_primes.join(";"));
        put("level".into(), self.level.clone());
        put("weight".into(), list(&self.weight));
        put("coefficient_field".into(), self.coefficient_field.clone());
        for (i, c) in self.components.iter().enumerate() {
            let k = format!("component.{i}");
            put(format!("{k}.class_index"), c.class_index.to_string());
            put(format!("{k}.representative"), c.representative.clone());
            put(format!("{k}.signature"), c.signature.clone());
            put(format!("{k}.genus"), c.genus.to_string());
            put(format!("{k}.sides"), c.sides.to_string());
            put(format!("{k}.generators"), c.generators.to_string());
            put(format!("{k}.area"), c.area.clone());
            put(format!("{k}.dim_h1"), c.dim_h1.to_string());
        }
        put("dim.H".into(), self.dim_h.to_string());
        put("dim.H_plus".into(), self.dim_h_plus.to_string());
        for op in std::iter::once(&self.conjugation).chain(&self.operators) {
            let k = format!("operator.{}", op.label);
            put(format!("{k}.kind"), op.kind.clone());
            put(format!("{k}.norm"), op.norm.to_string());
            put(format!("{k}.generator"), opt(&op.generator));
            put(format!("{k}.class"), op.class.to_string());
            put(format!("{k}.charpoly_H"), op.char_poly_h.clone());
            put(format!("{k}.charpoly_H_plus"), op.char_poly_plus.clone());
            put(format!("{k}.factorization_H_plus"), op.factorization_plus.clone());
        }
        put("skipped_primes".into(), self.skipped_primes.join(";"));
        put("decomposition.dimensions".into(), list(&self.decomposition));
        for (i, s) in self.systems.iter().enumerate() {
            let k = format!("system.{i}");
            put(format!("{k}.dimension"), s.dimension.to_string());
            put(format!("{k}.field_poly"), s.field_poly.clone());
            put(format!("{k}.generator"), s.generator.clone());
            for ev in s.eigenvalues.iter().chain(&s.atkin_lehner) {
                put(format!("{k}.eigenvalue.{}", ev.label), ev.value.clone());
            }
        }
        put(
            "component_decomposition.dimensions".into(),
            list(&self.component_decomposition.iter().map(|p| p.dimension).collect::<Vec<_>>()),
        );
        for (i, p) in self.component_decomposition.iter().enumerate() {
            put(format!("component_decomposition.{i}.field_poly"), p.field_poly.clone());
        }
        for (k, v) in &self.diagnostics {
            put(format!("diagnostics.{k}"), v.clone());
        }
        for (k, v) in &self.timing_ms {
            put(format!("timing.{k}_ms"), v.to_string());
        }
        e
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// JSON with sorted keys.
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    /// Table of eigenvalues: one row per Hecke prime, one column per system.
    pub fn eigenvalue_table(&self) -> Vec<(String, u64, Option<String>, Vec<String>)> {
        let Some(first) = self.systems.first() else {
            return Vec::new();
        };
        first
            .eigenvalues
            .iter()
            .map(|ev| {
                let vals = self
                    .systems
                    .iter()
                    .map(|s| s.eigenvalues.iter().find(|x| x.label == ev.label).map_or("-".into(), |x| x.value.clone()))
                    .collect();
                (ev.label.clone(), ev.norm, ev.generator.clone(), vals)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::from_ints;

    #[test]
    fn polynomials_print_canonically() {
        assert_eq!(format_poly(&from_ints(&[-4, 0, 1]), "T"), "T^2 - 4");
        assert_eq!(format_poly(&from_ints(&[9, 0, 31, 0, 11, 0, 1]), "T"), "T^6 + 11*T^4 + 31*T^2 + 9");
        assert_eq!(format_poly(&[Rat::new(1.into(), 2.into()), -Rat::one()], "x"), "-x + 1/2");
        assert_eq!(format_poly(&[], "x"), "0");
        let f = vec![(from_ints(&[-2, 1]), 2), (from_ints(&[2, 1]), 1)];
        assert_eq!(format_factorization(&f, "T"), "(T - 2)^2*(T + 2)");
    }
}
