//! Dirichlet domains in the unit disc, side pairings, vertex cycles,
//! Poincaré presentations and greedy reduction for the word problem.

use super::{cmat_mul, mobius, CMat, GroupContext, GroupElement, C64};
use crate::arith::enumerate::short_vectors;
use crate::error::{Error, Result};
use crate::quat::QuatElement;
use serde::Serialize;
use std::collections::HashSet;
use std::f64::consts::PI;

const BOX: f64 = 1.5;
const NONE: usize = usize::MAX;
const AREA_TOLERANCE: f64 = 1e-6;
const POINT_TOLERANCE: f64 = 1e-7;
const ENUMERATION_CAP: usize = 300_000;
const MAX_ROUNDS: usize = 60;
const REDUCTION_STEPS: usize = 100_000;

/// Options for domain construction.
#[derive(Clone, Debug)]
pub struct DomainOptions {
    pub initial_bound: Option<f64>,
    pub max_rounds: usize,
    /// Known units (e.g. the side pairings of an earlier run) added before
    /// the first round.
    pub seeds: Vec<QuatElement>,
}

impl Default for DomainOptions {
    fn default() -> Self {
        DomainOptions { initial_bound: None, max_rounds: MAX_ROUNDS, seeds: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct Side {
    /// Pairing element: maps this side onto side `paired`.
    pub element: GroupElement,
    pub start: C64,
    pub end: C64,
    /// Isometric circle carrying the side.
    pub circle_center: C64,
    pub radius: f64,
    pub paired: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexCycle {
    pub vertices: Vec<usize>,
    /// Sides whose pairing elements are applied in turn.
    pub sides: Vec<usize>,
    pub angle_sum: f64,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub center: (f64, f64),
    pub sides: Vec<Side>,
    pub vertices: Vec<C64>,
    pub angles: Vec<f64>,
    pub cycles: Vec<VertexCycle>,
    pub area: f64,
    pub expected_area: f64,
}

/// A word as `(generator, exponent)` pairs, multiplied left to right.
pub type Word = Vec<(usize, i32)>;

#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<GroupElement>,
    pub relations: Vec<Word>,
    pub genus: u32,
    pub elliptic_orders: Vec<u32>,
    /// Generator and exponent of each side's pairing element.
    pub side_generator: Vec<(usize, i32)>,
}

type P2 = (f64, f64);

fn dot(a: P2, b: P2) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn klein_to_disc(k: P2) -> C64 {
    let r2 = dot(k, k);
    let s = 1.0 + (1.0 - r2).max(0.0).sqrt();
    C64::new(k.0 / s, k.1 / s)
}

/// Isometric circle `|c z + d| = 1`: center and radius.
fn isometric_circle(g: &GroupElement) -> Option<(C64, f64)> {
    let c = g.matrix[1][0];
    let d = g.matrix[1][1];
    if c.norm() < 1e-12 {
        return None;
    }
    Some((-d / c, 1.0 / c.norm()))
}

/// Clips a convex polygon (vertex, label of outgoing side) by `n·x <= 1`.
fn clip(poly: &[(P2, usize)], n: P2, label: usize) -> Vec<(P2, usize)> {
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    let eps = 1e-13;
    for i in 0..k {
        let (p, lp) = poly[i];
        let (q, _) = poly[(i + 1) % k];
        let fp = dot(n, p) - 1.0;
        let fq = dot(n, q) - 1.0;
        let pin = fp <= eps;
        let qin = fq <= eps;
        if pin {
            out.push((p, lp));
            if !qin {
                let t = fp / (fp - fq);
                out.push(((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)), label));
            }
        } else if qin {
            let t = fp / (fp - fq);
            out.push(((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)), lp));
        }
    }
    // drop degenerate sides
    let mut changed = true;
    while changed && out.len() > 2 {
        changed = false;
        for i in 0..out.len() {
            let j = (i + 1) % out.len();
            let (a, b) = (out[i].0, out[j].0);
            if (a.0 - b.0).hypot(a.1 - b.1) < 1e-11 {
                out.remove(i);
                changed = true;
                break;
            }
        }
    }
    out
}

/// Exterior domain of a set of elements (Klein coordinates).
fn exterior_polygon(elements: &[GroupElement]) -> Vec<(P2, usize)> {
    let mut poly = vec![((-BOX, -BOX), NONE), ((BOX, -BOX), NONE), ((BOX, BOX), NONE), ((-BOX, BOX), NONE)];
    for (idx, g) in elements.iter().enumerate() {
        if let Some((c, _)) = isometric_circle(g) {
            poly = clip(&poly, (c.re, c.im), idx);
        }
    }
    poly
}

/// Hyperbolic area of a compact convex polygon given in the disc model with
/// its side circles, and the interior angles.
fn polygon_angles(vertices: &[C64], centers: &[C64]) -> Vec<f64> {
    let k = vertices.len();
    (0..k)
        .map(|i| {
            let v = vertices[i];
            let next = vertices[(i + 1) % k];
            let prev = vertices[(i + k - 1) % k];
            let tangent = |center: C64, toward: C64| {
                let r = v - center;
                let t = C64::new(-r.im, r.re);
                let d = toward - v;
                if t.re * d.re + t.im * d.im < 0.0 {
                    -t
                } else {
                    t
                }
            };
            let t1 = tangent(centers[i], next);
            let t0 = tangent(centers[(i + k - 1) % k], prev);
            let c = (t0.re * t1.re + t0.im * t1.im) / (t0.norm() * t1.norm());
            c.clamp(-1.0, 1.0).acos()
        })
        .collect()
}

fn is_inside(sides: &[GroupElement], z: C64, tol: f64) -> bool {
    sides.iter().all(|g| (g.matrix[1][0] * z + g.matrix[1][1]).norm() >= 1.0 - tol)
}

/// Fixed point in the disc of an elliptic element.
fn fixed_point(g: &GroupElement) -> C64 {
    let m = &g.matrix;
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    // c z^2 + (d - a) z - b = 0
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let z1 = (a - d + disc) / (2.0 * c);
    let z2 = (a - d - disc) / (2.0 * c);
    if z1.norm() < z2.norm() {
        z1
    } else {
        z2
    }
}

struct Builder<'a> {
    ctx: &'a GroupContext,
    elements: Vec<GroupElement>,
    seen: HashSet<QuatElement>,
}

impl<'a> Builder<'a> {
    fn add(&mut self, g: GroupElement) -> bool {
        if self.ctx.is_identity(&g.quat) || self.seen.contains(&g.quat) {
            return false;
        }
        let inv = self.ctx.inverse(&g);
        self.seen.insert(g.quat.clone());
        self.elements.push(g);
        if !self.seen.contains(&inv.quat) {
            self.seen.insert(inv.quat.clone());
            self.elements.push(inv);
        }
        true
    }
}

/// Units of the order with totally positive norm whose centered form value
/// is at most `bound`, deduplicated modulo `Z_F^×`.
pub fn enumerate_units(ctx: &GroupContext, bound: f64) -> Result<Vec<GroupElement>> {
    enumerate_units_at(ctx, ctx.center, bound)
}

/// As [`enumerate_units`] with the form centered at `p` in the upper half-plane.
pub fn enumerate_units_at(ctx: &GroupContext, p: C64, bound: f64) -> Result<Vec<GroupElement>> {
    let fld = ctx.field();
    let budget = ctx
        .nrd_reps
        .iter()
        .map(|u| ctx.alg.ramified_real.iter().map(|&v| fld.embed(u, v)).sum::<f64>())
        .fold(1.0, f64::max);
    let t = (bound / (2.0 * budget)).max(1.0);
    let total = bound + t * budget;
    let (emb, gram) = ctx.weighted_basis_at(p, t);
    let vecs = short_vectors(&gram, total, ENUMERATION_CAP)
        .map_err(|_| Error::EnumerationExhausted(format!("more than {ENUMERATION_CAP} lattice vectors below {bound:.2}")))?;
    let mut out = vec![ctx.identity()];
    let mut seen: HashSet<QuatElement> = out.iter().map(|g| g.quat.clone()).collect();
    for (_, c) in vecs {
        let an = emb.approx_norm(&c);
        if (an.abs() - 1.0).abs() > 1e-6 {
            continue;
        }
        let m = emb.split_matrix(&c);
        if m[0] * m[3] - m[1] * m[2] <= 0.0 {
            continue;
        }
        let x = emb.element(&ctx.alg, &c);
        if let Some(g) = ctx.normalize(&x) {
            if seen.insert(g.quat.clone()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Units near a point of the disc, shrinking the bound if the enumeration
/// overflows.
fn probe(ctx: &GroupContext, z: C64, bound: f64) -> Vec<GroupElement> {
    let p = ctx.disc_to_upper(z);
    let mut b = bound;
    for _ in 0..4 {
        match enumerate_units_at(ctx, p, b) {
            Ok(u) => return u,
            Err(_) => b *= 0.6,
        }
    }
    Vec::new()
}

/// `|m|_F^2 = 2 cosh d(0, g(0))`, accurate far from the center where `g(0)`
/// itself is not.
fn displacement(m: &CMat) -> f64 {
    m.iter().flatten().map(|c| c.norm_sqr()).sum()
}

/// Greedy reduction of `g` toward the identity using the given side
/// elements, each step taking the side that most decreases `d(0, g(0))`;
/// returns the indices applied (in order) and the final element.
fn reduce_point(ctx: &GroupContext, sides: &[GroupElement], g: &GroupElement) -> Result<(Vec<usize>, GroupElement)> {
    let mut cur = g.clone();
    let mut applied = Vec::new();
    for _ in 0..REDUCTION_STEPS {
        if ctx.is_identity(&cur.quat) {
            return Ok((applied, cur));
        }
        let here = displacement(&cur.matrix);
        let mut best: Option<(usize, f64)> = None;
        for (k, s) in sides.iter().enumerate() {
            let v = displacement(&cmat_mul(&s.matrix, &cur.matrix));
            if v < here * (1.0 - 1e-12) && best.is_none_or(|(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        let Some((k, _)) = best else {
            return Ok((applied, cur));
        };
        cur = ctx.mul(&sides[k], &cur);
        applied.push(k);
    }
    Err(Error::EnumerationExhausted("word reduction did not terminate".into()))
}

/// Builds the Dirichlet domain centered at the context's center, stopping
/// when its area equals `expected_area`.
pub fn fundamental_domain(ctx: &GroupContext, expected_area: f64, opts: &DomainOptions) -> Result<(FundamentalDomain, Presentation)> {
    let n = ctx.field().degree as f64;
    let mut bound = opts.initial_bound.unwrap_or(3.0 * (n + 1.0));
    let probe_bound = 2.0 * 3.0f64.cosh() + n;
    let mut b = Builder { ctx, elements: Vec::new(), seen: HashSet::new() };
    let mut last_area = f64::INFINITY;
    let mut center_done = false;
    for q in &opts.seeds {
        if let Some(g) = ctx.normalize(q) {
            b.add(g);
        }
    }
    for _round in 0..opts.max_rounds {
        if !center_done {
            match enumerate_units(ctx, bound) {
                Ok(units) => {
                    for g in units {
                        b.add(g);
                    }
                    bound *= 1.5;
                }
                Err(_) => center_done = true,
            }
        }
        let poly = exterior_polygon(&b.elements);
        let compact = poly.iter().all(|(p, l)| *l != NONE && dot(*p, *p) < 1.0 - 1e-12);
        let side_elems: Vec<GroupElement> = {
            let mut v: Vec<usize> = poly.iter().map(|x| x.1).filter(|&l| l != NONE).collect();
            v.sort();
            v.dedup();
            v.into_iter().map(|i| b.elements[i].clone()).collect()
        };
        if compact {
            let (verts, centers) = disc_polygon(&poly, &b.elements);
            let angles = polygon_angles(&verts, &centers);
            let area = (verts.len() as f64 - 2.0) * PI - angles.iter().sum::<f64>();
            last_area = area;
            if ((area - expected_area) / expected_area).abs() < AREA_TOLERANCE {
                return finish(ctx, &poly, &b.elements, expected_area);
            }
            // vertex reduction: images of vertices under side pairings must lie in the domain
            let mut new = Vec::new();
            for (i, (_, l)) in poly.iter().enumerate() {
                let g = &b.elements[*l];
                for v in [verts[i], verts[(i + 1) % verts.len()]] {
                    let w = mobius(&g.matrix, v);
                    if !is_inside(&side_elems, w, 1e-9) {
                        let (_, r) = reduce_vertex(ctx, &side_elems, g, v)?;
                        new.push(r);
                    }
                }
            }
            for g in new {
                b.add(g);
            }
        }
        if center_done {
            // units near the vertices of the current polygon
            let mut found = Vec::new();
            for (p, _) in &poly {
                let r = dot(*p, *p).sqrt();
                let k = if r < 1.0 - 1e-9 { *p } else { (p.0 / r * 0.999, p.1 / r * 0.999) };
                found.extend(probe(ctx, klein_to_disc(k), probe_bound));
            }
            for g in found {
                b.add(g);
            }
        }
        // products of side pairings
        let mut prods = Vec::new();
        for x in &side_elems {
            for y in &side_elems {
                prods.push(ctx.mul(x, y));
            }
        }
        for g in prods {
            b.add(g);
        }
        // keep only elements that cut the current polygon, plus inverses
        let poly = exterior_polygon(&b.elements);
        let keep: HashSet<usize> = poly.iter().map(|x| x.1).filter(|&l| l != NONE).collect();
        let mut kept: Vec<GroupElement> = b.elements.iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, g)| g.clone()).collect();
        let invs: Vec<GroupElement> = kept.iter().map(|g| ctx.inverse(g)).collect();
        kept.extend(invs);
        b.elements.clear();
        b.seen.clear();
        for g in kept {
            b.add(g);
        }
    }
    Err(Error::DomainNotClosed {
        height: bound as u64,
        detail: format!("area {last_area:.9} after {} rounds, expected {expected_area:.9}", opts.max_rounds),
    })
}

/// Floating point version of [`reduce_point`] tracking only `g(0)`.
fn reduce_point_approx(sides: &[GroupElement], g: &GroupElement) -> Vec<usize> {
    let mut z = mobius(&g.matrix, C64::new(0.0, 0.0));
    let mut applied = Vec::new();
    for _ in 0..REDUCTION_STEPS {
        let mut best: Option<(usize, f64)> = None;
        for (k, s) in sides.iter().enumerate() {
            let v = (s.matrix[1][0] * z + s.matrix[1][1]).norm();
            if v < 1.0 - 1e-10 && best.is_none_or(|(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        let Some((k, _)) = best else {
            break;
        };
        z = mobius(&sides[k].matrix, z);
        applied.push(k);
    }
    applied
}

/// Reduces `g(v)` back into the domain; returns the reducing element `h g`.
fn reduce_vertex(ctx: &GroupContext, sides: &[GroupElement], g: &GroupElement, v: C64) -> Result<(usize, GroupElement)> {
    let mut cur = g.clone();
    let mut z = mobius(&g.matrix, v);
    for steps in 0..REDUCTION_STEPS {
        let mut best: Option<(usize, f64)> = None;
        for (k, s) in sides.iter().enumerate() {
            let val = (s.matrix[1][0] * z + s.matrix[1][1]).norm();
            if val < 1.0 - 1e-9 && best.is_none_or(|(_, b)| val < b) {
                best = Some((k, val));
            }
        }
        let Some((k, _)) = best else {
            return Ok((steps, cur));
        };
        cur = ctx.mul(&sides[k], &cur);
        z = mobius(&sides[k].matrix, z);
    }
    Err(Error::EnumerationExhausted("vertex reduction did not terminate".into()))
}

fn disc_polygon(poly: &[(P2, usize)], elements: &[GroupElement]) -> (Vec<C64>, Vec<C64>) {
    let verts: Vec<C64> = poly.iter().map(|(p, _)| klein_to_disc(*p)).collect();
    let centers: Vec<C64> = poly.iter().map(|(_, l)| isometric_circle(&elements[*l]).unwrap().0).collect();
    (verts, centers)
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() < POINT_TOLERANCE
}

fn finish(ctx: &GroupContext, poly: &[(P2, usize)], elements: &[GroupElement], expected_area: f64) -> Result<(FundamentalDomain, Presentation)> {
    let arg = |p: &P2| {
        let a = p.1.atan2(p.0);
        if a < 0.0 { a + 2.0 * PI } else { a }
    };
    let first = (0..poly.len()).min_by(|&i, &j| arg(&poly[i].0).total_cmp(&arg(&poly[j].0))).unwrap_or(0);
    let mut poly = poly.to_vec();
    poly.rotate_left(first);
    let poly = &poly[..];
    let (verts, _) = disc_polygon(poly, elements);
    let k = verts.len();
    let mut sides: Vec<Side> = Vec::new();
    for i in 0..k {
        let g = &elements[poly[i].1];
        let (c, r) = isometric_circle(g).unwrap();
        let (p, q) = (verts[i], verts[(i + 1) % k]);
        let (gp, gq) = (mobius(&g.matrix, p), mobius(&g.matrix, q));
        if close(gp, q) && close(gq, p) {
            // order two: split at the fixed point
            let f = fixed_point(g);
            sides.push(Side { element: g.clone(), start: p, end: f, circle_center: c, radius: r, paired: NONE });
            sides.push(Side { element: g.clone(), start: f, end: q, circle_center: c, radius: r, paired: NONE });
        } else {
            sides.push(Side { element: g.clone(), start: p, end: q, circle_center: c, radius: r, paired: NONE });
        }
    }
    let m = sides.len();
    for i in 0..m {
        let g = &sides[i].element;
        let (gp, gq) = (mobius(&g.matrix, sides[i].start), mobius(&g.matrix, sides[i].end));
        let j = (0..m)
            .find(|&j| close(sides[j].start, gq) && close(sides[j].end, gp))
            .ok_or_else(|| Error::DomainNotClosed { height: 0, detail: format!("side {i} has no partner") })?;
        let prod = ctx.alg.mul(&sides[j].element.quat, &g.quat);
        if !ctx.is_identity(&prod) {
            return Err(Error::DomainNotClosed { height: 0, detail: format!("sides {i} and {j} are not paired by inverse elements") });
        }
        sides[i].paired = j;
    }
    let vertices: Vec<C64> = sides.iter().map(|s| s.start).collect();
    let circle_centers: Vec<C64> = sides.iter().map(|s| s.circle_center).collect();
    let angles = polygon_angles(&vertices, &circle_centers);
    let area = (m as f64 - 2.0) * PI - angles.iter().sum::<f64>();
    // vertex cycles: the pairing of side j sends vertex j to vertex paired(j)+1
    let mut visited = vec![false; m];
    let mut cycles = Vec::new();
    for start in 0..m {
        if visited[start] {
            continue;
        }
        let mut vs = Vec::new();
        let mut ss = Vec::new();
        let mut v = start;
        let mut sum = 0.0;
        while !visited[v] {
            visited[v] = true;
            vs.push(v);
            ss.push(v);
            sum += angles[v];
            v = (sides[v].paired + 1) % m;
        }
        let e = (2.0 * PI / sum).round();
        if e < 1.0 || (e * sum - 2.0 * PI).abs() > 1e-5 {
            return Err(Error::AmbiguousVertex(format!("vertex cycle with angle sum {sum}")));
        }
        cycles.push(VertexCycle { vertices: vs, sides: ss, angle_sum: sum, order: e as u32 });
    }
    // generators: one per side pair
    let mut side_generator = vec![(NONE, 0); m];
    let mut generators = Vec::new();
    for i in 0..m {
        if side_generator[i].0 != NONE {
            continue;
        }
        let j = sides[i].paired;
        let gi = generators.len();
        generators.push(sides[i].element.clone());
        side_generator[i] = (gi, 1);
        if j != i {
            side_generator[j] = (gi, -1);
        }
    }
    let mut relations = Vec::new();
    for c in &cycles {
        let mut w: Word = Vec::new();
        for _ in 0..c.order {
            for &s in c.sides.iter() {
                w.insert(0, side_generator[s]);
            }
        }
        relations.push(w);
    }
    let pairs = generators.len() as i64;
    let v = cycles.len() as i64;
    let twice_genus = 1 + pairs - v;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::DomainNotClosed { height: 0, detail: "inconsistent Euler characteristic".into() });
    }
    let mut elliptic_orders: Vec<u32> = cycles.iter().map(|c| c.order).filter(|&e| e > 1).collect();
    elliptic_orders.sort();
    let pres = Presentation { generators, relations, genus: (twice_genus / 2) as u32, elliptic_orders, side_generator };
    for r in &pres.relations {
        let x = evaluate(ctx, &pres, r);
        if !ctx.is_identity(&x.quat) {
            return Err(Error::DomainNotClosed { height: 0, detail: "a cycle relation does not hold exactly".into() });
        }
    }
    let dom = FundamentalDomain {
        center: (ctx.center.re, ctx.center.im),
        sides,
        vertices,
        angles,
        cycles,
        area,
        expected_area,
    };
    Ok((dom, pres))
}

/// Exact product of a word.
pub fn evaluate(ctx: &GroupContext, pres: &Presentation, w: &[(usize, i32)]) -> GroupElement {
    let mut acc = ctx.identity();
    for &(g, e) in w {
        let base = if e < 0 { ctx.inverse(&pres.generators[g]) } else { pres.generators[g].clone() };
        for _ in 0..e.unsigned_abs() {
            acc = ctx.mul(&acc, &base);
        }
    }
    acc
}

/// Writes a group element as a word in the generators.
pub fn reduce_word(ctx: &GroupContext, dom: &FundamentalDomain, pres: &Presentation, g: &QuatElement) -> Result<Word> {
    if !ctx.order.contains(g) {
        return Err(Error::NotInOrder);
    }
    let ge = ctx.normalize(g).ok_or(Error::NotInOrder)?;
    let side_elems: Vec<GroupElement> = dom.sides.iter().map(|s| s.element.clone()).collect();
    let mut applied = reduce_point_approx(&side_elems, &ge);
    let mut cur = ge.quat.clone();
    for &k in &applied {
        cur = ctx.alg.mul(&side_elems[k].quat, &cur);
    }
    if !ctx.is_identity(&cur) {
        let (exact, rest) = reduce_point(ctx, &side_elems, &ge)?;
        if !ctx.is_identity(&rest.quat) {
            return Err(Error::AmbiguousVertex("reduced element is not the identity".into()));
        }
        applied = exact;
    }
    // g = s_{k1}^-1 s_{k2}^-1 ... s_{km}^-1
    let mut w: Word = Vec::new();
    for &k in &applied {
        let (gen, e) = pres.side_generator[k];
        w.push((gen, -e));
    }
    Ok(free_reduce(w))
}

/// Free reduction, merging adjacent powers of the same generator.
pub fn free_reduce(w: Word) -> Word {
    let mut out: Word = Vec::new();
    for (g, e) in w {
        if let Some(last) = out.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
                continue;
            }
        }
        if e != 0 {
            out.push((g, e));
        }
    }
    out
}

pub fn word_length(w: &[(usize, i32)]) -> usize {
    w.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::unit_group;
    use crate::fuchsian::volume::group_area;
    use crate::fuchsian::DEFAULT_CENTER;
    use crate::quat::lattice::maximal_order;
    use crate::quat::tests::cubic_algebra;

    #[test]
    fn cubic_signature_and_word_problem() {
        let alg = cubic_algebra();
        let o = maximal_order(&alg, None).unwrap();
        let ug = unit_group(&alg.field).unwrap();
        let ctx = GroupContext::new(&alg, &o, &ug, DEFAULT_CENTER).unwrap();
        let area = group_area(&alg.field, &[], ctx.nrd_reps.len()).unwrap();
        let (dom, pres) = fundamental_domain(&ctx, area, &DomainOptions::default()).unwrap();
        assert_eq!(pres.genus, 1);
        assert_eq!(pres.elliptic_orders, vec![2, 2, 2, 2, 2, 3, 3]);
        assert!((dom.area - area).abs() < 1e-6);
        for g in &pres.generators {
            let w = reduce_word(&ctx, &dom, &pres, &g.quat).unwrap();
            let back = evaluate(&ctx, &pres, &w);
            assert!(ctx.same_element(&back.quat, &g.quat));
        }
        let x = ctx.mul(&pres.generators[0], &pres.generators[pres.generators.len() - 1]);
        let y = ctx.mul(&x, &pres.generators[1]);
        let w = reduce_word(&ctx, &dom, &pres, &y.quat).unwrap();
        assert!(ctx.same_element(&evaluate(&ctx, &pres, &w).quat, &y.quat));
        assert!(crate::fuchsian::svg::render_svg(&dom).starts_with("<svg"));
    }
}
