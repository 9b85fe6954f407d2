//! Job orchestration: configuration, staged computation with caching of the
//! prime-independent geometry and of each operator, and the result document.

pub mod cache;
pub mod config;
pub mod document;

use crate::arith::matrix::{identity, mat_mul, Matrix};
use crate::arith::ring::{Int, Rat};
use crate::cohomology::El;
use crate::error::{Error, Result};
use crate::field::classgroup::principal_generator;
use crate::field::primes::primes_up_to;
use crate::field::{factor_rational_prime, FieldElement, FracIdeal, NumberField, PrimeIdeal};
use crate::fuchsian::svg::render_svg;
use crate::hecke::{
    atkin_lehner_operator, build_components, diamond_operator, component_preserving, conjugation_operator, hecke_operator, plus_subspace, prime_label, BuildOptions,
    ComponentSystem, OperatorKind, OperatorMatrix,
};
use crate::quat::{with_ramification, QuatAlgebra, QuatElement};
use crate::spectral::{char_poly, char_poly_over, decompose, factor_rational, max_root_modulus, to_rational_matrix, Eigenvalue, LabeledOperator};
use cache::{content_hash, Cache};
use config::{AlgebraSpec, JobConfig, PrimeSpec};
use document::{format_factorization, format_poly, ComponentSummary, EigenvalueEntry, OperatorSummary, PieceSummary, ResultDocument, SystemSummary};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

const CACHE_VERSION: &str = "3";
const AUTO_ALGEBRA_HEIGHT: i64 = 6;

/// Output of [`run`].
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub document: ResultDocument,
    /// SVG of the fundamental domain of the trivial component.
    pub svg: String,
    pub system: ComponentSystem,
    pub conjugation: OperatorMatrix,
    /// Hecke and Atkin-Lehner operators in the order of `primes`.
    pub operators: Vec<OperatorMatrix>,
    pub primes: Vec<(OperatorKind, PrimeIdeal)>,
}

#[derive(Serialize, Deserialize)]
struct CachedGeometry {
    fingerprint: String,
    seeds: Vec<Vec<QuatElement>>,
}

#[derive(Serialize, Deserialize)]
struct CachedOperator {
    fingerprint: String,
    routing: Vec<(usize, usize)>,
    rows: Vec<Vec<El>>,
}

fn element(fld: &NumberField, c: &[Rat], what: &str) -> Result<FieldElement> {
    if c.len() > fld.degree {
        return Err(Error::Config(format!("{what}: {} coordinates for a field of degree {}", c.len(), fld.degree)));
    }
    Ok(fld.from_power_coords(c))
}

fn find_prime(fld: &NumberField, spec: &PrimeSpec) -> Result<PrimeIdeal> {
    let target = FracIdeal::from_generators(fld, &[fld.from_int(&Int::from(spec.p)), element(fld, &spec.element, "prime")?])
        .ok_or_else(|| Error::Config("prime generators are zero".into()))?;
    factor_rational_prime(fld, spec.p)?
        .into_iter()
        .find(|q| q.ideal == target)
        .ok_or_else(|| Error::Config(format!("({}, {:?}) is not a prime ideal", spec.p, spec.element)))
}

fn build_algebra(cfg: &JobConfig) -> Result<QuatAlgebra> {
    let poly: Vec<Int> = cfg.poly.iter().map(|&c| Int::from(c)).collect();
    let fld = NumberField::with_options(&poly, cfg.places_order.clone(), cfg.precision_bits).map_err(|e| e.at("field"))?;
    let alg = match &cfg.algebra {
        AlgebraSpec::Explicit { a, b } => {
            let a = element(&fld, a, "algebra.a")?;
            let b = element(&fld, b, "algebra.b")?;
            QuatAlgebra::new(fld, a, b)
        }
        AlgebraSpec::Auto { ramified } => {
            let ideals = ramified.iter().map(|p| find_prime(&fld, p).map(|q| q.ideal)).collect::<Result<Vec<_>>>()?;
            with_ramification(&fld, &ideals, cfg.split_index.unwrap_or(0), AUTO_ALGEBRA_HEIGHT)
        }
    }
    .map_err(|e| e.at("algebra"))?;
    if let Some(s) = cfg.split_index {
        if s != alg.split_place {
            return Err(Error::Config(format!("places.split_index is {s} but the algebra splits at place {}", alg.split_place)));
        }
    }
    Ok(alg)
}

fn level_ideal(fld: &NumberField, cfg: &JobConfig) -> Result<FracIdeal> {
    if cfg.level.is_empty() {
        return Ok(FracIdeal::unit(fld));
    }
    let gens = cfg.level.iter().map(|g| element(fld, g, "level.generators")).collect::<Result<Vec<_>>>()?;
    FracIdeal::from_generators(fld, &gens).ok_or_else(|| Error::Config("level generators are all zero".into()))
}

fn select_primes(fld: &NumberField, cfg: &JobConfig) -> Result<Vec<PrimeIdeal>> {
    let mut ps = match cfg.norm_bound {
        Some(b) => primes_up_to(fld, b)?,
        None => Vec::new(),
    };
    for spec in &cfg.prime_list {
        let q = find_prime(fld, spec)?;
        if !ps.contains(&q) {
            ps.push(q);
        }
    }
    ps.sort_by(|a, b| (a.norm(), &a.ideal.lattice.basis).cmp(&(b.norm(), &b.ideal.lattice.basis)));
    Ok(ps)
}

fn geometry_fingerprint(sys: &ComponentSystem) -> Result<String> {
    let data: Vec<(Vec<&QuatElement>, &Vec<crate::fuchsian::domain::Word>)> = sys
        .components
        .iter()
        .map(|c| (c.presentation.generators.iter().map(|g| &g.quat).collect(), &c.presentation.relations))
        .collect();
    Ok(content_hash(&serde_json::to_string(&data)?))
}

fn cached_operator<F>(cache: Option<&Cache>, fingerprint: &str, sys: &ComponentSystem, kind: OperatorKind, label: &str, compute: F) -> Result<OperatorMatrix>
where
    F: FnOnce() -> Result<OperatorMatrix>,
{
    let name = format!("operator:{label}");
    if let Some(c) = cache {
        if let Some(op) = c.load::<CachedOperator>(&name) {
            if op.fingerprint == fingerprint && op.rows.len() == sys.dim {
                let m = Matrix::from_rows(op.rows);
                return Ok(OperatorMatrix { kind, label: label.to_string(), matrix: m, routing: op.routing });
            }
        }
    }
    let op = compute()?;
    if let Some(c) = cache {
        c.store(&name, &CachedOperator { fingerprint: fingerprint.to_string(), routing: op.routing.clone(), rows: op.matrix.to_rows() })?;
    }
    Ok(op)
}

/// Runs `f` on every task over a shared work queue, keeping input order.
fn parallel_map<T: Sync, R: Send>(tasks: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(tasks.len()).max(1);
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..tasks.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= tasks.len() {
                    break;
                }
                let r = f(&tasks[i]);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|r| r.expect("every task ran")).collect()
}

fn format_eigenvalue(v: &Eigenvalue) -> String {
    match v {
        Eigenvalue::Rational(r) => r.to_string(),
        Eigenvalue::Algebraic(c) => format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        Eigenvalue::Root(p) => format!("root of {}", format_poly(p, "T")),
    }
}

fn timed<T>(timing: &mut BTreeMap<String, u64>, key: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let r = f().map_err(|e| e.at(key));
    timing.insert(key.to_string(), t.elapsed().as_millis() as u64);
    r
}

/// Runs a job. With `cache_root`, the geometry and every operator are
/// loaded from or stored to a directory keyed by the content hash of the
/// field, algebra, level and weight.
pub fn run(cfg: &JobConfig, cache_root: Option<&Path>) -> Result<RunOutput> {
    let mut timing = BTreeMap::new();
    let mut diagnostics = BTreeMap::new();
    let alg = timed(&mut timing, "algebra", || build_algebra(cfg))?;
    let fld = alg.field.clone();
    let level = level_ideal(&fld, cfg)?;
    let cache = cache_root.map(|r| Cache::new(r, &format!("{CACHE_VERSION}\n{}", cfg.geometry_key())));
    let cached_geometry: Option<CachedGeometry> = cache.as_ref().and_then(|c| c.load("geometry"));
    let mut opts = BuildOptions { unit_height: cfg.unit_height, ..BuildOptions::default() };
    opts.domain.initial_bound = cfg.enum_bound;
    if let Some(g) = &cached_geometry {
        opts.seeds = g.seeds.clone();
    }
    let sys = timed(&mut timing, "geometry", || build_components(&alg, &level, &cfg.weight, &FracIdeal::unit(&fld), &opts))?;
    let fingerprint = geometry_fingerprint(&sys)?;
    let warm = cached_geometry.as_ref().is_some_and(|g| g.fingerprint == fingerprint);
    if let Some(c) = &cache {
        if !warm {
            let seeds = sys.components.iter().map(|c| c.domain.sides.iter().map(|s| s.element.quat.clone()).collect()).collect();
            c.store("geometry", &CachedGeometry { fingerprint: fingerprint.clone(), seeds })?;
        }
    }
    let store_cache = cache.as_ref();
    let k = sys.field().clone();

    let primes = select_primes(&fld, cfg).map_err(|e| e.at("primes"))?;
    let mut tasks = Vec::new();
    let mut skipped = Vec::new();
    for p in &primes {
        if sys.ramified.contains(p) {
            tasks.push((OperatorKind::AtkinLehner, p.clone()));
        } else if sys.level_primes.contains(p) {
            skipped.push(prime_label(&alg, p));
        } else {
            tasks.push((OperatorKind::Hecke, p.clone()));
        }
    }
    let t = Instant::now();
    let w = cached_operator(store_cache, &fingerprint, &sys, OperatorKind::Conjugation, "W_inf", || conjugation_operator(&sys)).map_err(|e| e.at("conjugation"))?;
    let results = parallel_map(&tasks, |(kind, p)| {
        let label = prime_label(&alg, p);
        match kind {
            OperatorKind::AtkinLehner => {
                let l = format!("W:{label}");
                cached_operator(store_cache, &fingerprint, &sys, OperatorKind::AtkinLehner, &l, || {
                    atkin_lehner_operator(&sys, p).map(|mut o| {
                        o.label = l.clone();
                        o
                    })
                })
            }
            _ => cached_operator(store_cache, &fingerprint, &sys, OperatorKind::Hecke, &label, || hecke_operator(&sys, p)),
        }
        .map_err(|e| e.at(&format!("hecke {label}")))
    });
    let ops: Vec<OperatorMatrix> = results.into_iter().collect::<Result<_>>()?;
    timing.insert("hecke".into(), t.elapsed().as_millis() as u64);

    let t = Instant::now();
    let plus = plus_subspace(&sys, &w);
    let kd = k.degree();
    let labeled: Vec<LabeledOperator> = ops
        .iter()
        .zip(&tasks)
        .map(|(o, (_, p))| LabeledOperator { label: o.label.clone(), norm: p.norm(), matrix: to_rational_matrix(&k, &plus.restrict(&k, &o.matrix)) })
        .collect();
    let ug = &sys.units;
    let mut operators = Vec::new();
    let summary = |o: &OperatorMatrix, norm: u64, generator: Option<String>, class: usize, lab: Option<&LabeledOperator>| -> Result<OperatorSummary> {
        let cp = match lab {
            Some(l) if kd == 1 => char_poly(&l.matrix),
            _ => char_poly_over(&k, &plus.restrict(&k, &o.matrix)),
        };
        Ok(OperatorSummary {
            label: o.label.clone(),
            kind: format!("{:?}", o.kind),
            norm,
            generator,
            class,
            char_poly_h: format_poly(&char_poly_over(&k, &o.matrix), "T"),
            char_poly_plus: format_poly(&cp, "T"),
            factorization_plus: format_factorization(&factor_rational(&cp, cfg.factor_degree)?, "T"),
        })
    };
    let conjugation = summary(&w, 1, None, sys.conjugation_class, None)?;
    let mut generators = Vec::new();
    for ((o, (_, p)), l) in ops.iter().zip(&tasks).zip(&labeled) {
        let g = principal_generator(&fld, ug, &p.ideal)?.map(|g| fld.format_element(&g, "w"));
        generators.push(g.clone());
        operators.push(summary(o, p.norm(), g, sys.class_of(&p.ideal)?, Some(l))?);
    }
    let mut order: Vec<usize> = (0..labeled.len()).collect();
    order.sort_by_key(|&i| (tasks[i].0 == OperatorKind::AtkinLehner, i));
    let sorted: Vec<LabeledOperator> = order.iter().map(|&i| labeled[i].clone()).collect();
    let dec = decompose(&sorted, kd * plus.dim(), cfg.factor_degree).map_err(|e| e.at("spectral"))?;
    let mut ramanujan_ok = true;
    let systems: Vec<SystemSummary> = dec
        .constituents
        .iter()
        .map(|c| {
            let mut eigenvalues = Vec::new();
            let mut atkin_lehner = Vec::new();
            for (pos, &i) in order.iter().enumerate() {
                let (label, v) = &c.system.eigenvalues[pos];
                let entry = EigenvalueEntry { label: label.clone(), norm: tasks[i].1.norm(), generator: generators[i].clone(), value: format_eigenvalue(v) };
                if tasks[i].0 == OperatorKind::AtkinLehner {
                    atkin_lehner.push(entry);
                } else {
                    let bound = 2.0 * (tasks[i].1.norm() as f64).sqrt();
                    if max_root_modulus(&c.system.char_polys[pos].1) > bound * (1.0 + 1e-9) {
                        ramanujan_ok = false;
                    }
                    eigenvalues.push(entry);
                }
            }
            SystemSummary {
                dimension: c.system.dimension / kd,
                field_poly: format_poly(&c.system.field_poly, "x"),
                generator: c.system.generator.clone(),
                eigenvalues,
                atkin_lehner,
            }
        })
        .collect();
    let hecke_ops: Vec<OperatorMatrix> = ops.iter().filter(|o| o.kind == OperatorKind::Hecke).cloned().collect();
    let component_decomposition = if sys.components.len() > 1 {
        let cops = component_preserving(&sys, &plus, &w, &hecke_ops);
        decompose(&cops, kd * plus.dim(), cfg.factor_degree)
            .map_err(|e| e.at("spectral"))?
            .constituents
            .iter()
            .map(|c| PieceSummary { dimension: c.system.dimension / kd, field_poly: format_poly(&c.system.field_poly, "x") })
            .collect()
    } else {
        dec.constituents.iter().map(|c| PieceSummary { dimension: c.system.dimension / kd, field_poly: format_poly(&c.system.field_poly, "x") }).collect()
    };
    timing.insert("spectral".into(), t.elapsed().as_millis() as u64);

    let mut components = Vec::new();
    for c in &sys.components {
        let p = &c.presentation;
        let orders = p.elliptic_orders.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        let signature = if orders.is_empty() { format!("({};)", p.genus) } else { format!("({}; {orders})", p.genus) };
        let rel = ((c.domain.area - c.domain.expected_area) / c.domain.expected_area).abs();
        diagnostics.insert(format!("component.{}.gauss_bonnet", c.class_index), if rel < 1e-6 { "agrees".into() } else { "disagrees".to_string() });
        components.push(ComponentSummary {
            class_index: c.class_index,
            representative: c.representative.format(&fld, "w").replace(' ', ""),
            signature,
            genus: p.genus,
            elliptic_orders: p.elliptic_orders.clone(),
            sides: c.domain.sides.len(),
            generators: p.generators.len(),
            area: format!("{:.6}", c.domain.expected_area),
            dim_h1: c.cohomology.dim(),
        });
    }
    for (o, (kind, p)) in ops.iter().zip(&tasks) {
        if *kind != OperatorKind::AtkinLehner {
            continue;
        }
        let sq = mat_mul(&k, &o.matrix, &o.matrix);
        let verdict = if sq == identity(&k, sys.dim) {
            "identity"
        } else if sq == diamond_operator(&sys, &p.ideal).map_err(|e| e.at("atkin-lehner"))?.matrix {
            "central"
        } else {
            "other"
        };
        diagnostics.insert(format!("square.{}", o.label), verdict.to_string());
    }
    diagnostics.insert("precision_bits".into(), cfg.precision_bits.to_string());
    diagnostics.insert("factor_degree".into(), cfg.factor_degree.to_string());
    diagnostics.insert("unit_height".into(), cfg.unit_height.map_or("default".into(), |h| h.to_string()));
    diagnostics.insert("enum_bound".into(), cfg.enum_bound.map_or("default".into(), |b| format!("{b:?}")));
    diagnostics.insert("ramanujan".into(), if ramanujan_ok { "holds".into() } else { "violated".into() });
    diagnostics.insert("routing".into(), if ops.iter().chain(std::iter::once(&w)).all(|o| crate::hecke::routing_holds(&sys, o)) { "holds".into() } else { "violated".into() });

    let document = ResultDocument {
        config: cfg.emit(),
        field_degree: fld.degree,
        field_discriminant: fld.disc.to_string(),
        split_place: alg.split_place,
        strict_class_number: sys.class_group.order,
        algebra_discriminant: alg.discriminant()?.format(&fld, "w").replace(' ', ""),
        ramified_primes: sys.ramified.iter().map(|p| prime_label(&alg, p)).collect(),
        level: level.format(&fld, "w").replace(' ', ""),
        weight: cfg.weight.clone(),
        coefficient_field: if k.degree() == 1 { "Q".into() } else { format!("degree {}", k.degree()) },
        components,
        dim_h: sys.dim,
        dim_h_plus: plus.dim(),
        conjugation,
        operators,
        skipped_primes: skipped,
        decomposition: dec.dimensions().iter().map(|d| d / kd).collect(),
        systems,
        component_decomposition,
        diagnostics,
        timing_ms: timing,
    };
    let svg = render_svg(&sys.components[0].domain);
    Ok(RunOutput { document, svg, system: sys, conjugation: w, operators: ops, primes: tasks })
}
