//! Components indexed by the strict class group, and the Hecke, complex
//! conjugation and Atkin–Lehner operators on `H = ⊕_b H¹(Γ(1)_b, V_b)`.

use crate::arith::matrix::{identity, inverse, kernel, mat_mul, mat_sub, rref, Matrix};
use crate::arith::ring::Field;
use crate::cohomology::{h1_basis, Action, CoeffField, CoinducedModule, Cohomology, El, LevelStructure, WeightModule};
use crate::error::{Error, Result};
use crate::field::p1::{local_point, P1};
use crate::field::primes::factor_ideal;
use crate::field::units::unit_group_with_bound;
use crate::field::{strict_class_group, unit_group, FracIdeal, PrimeIdeal, StrictClassGroup, UnitGroup};
use crate::fuchsian::domain::{fundamental_domain, reduce_word, DomainOptions, FundamentalDomain, Presentation, Word};
use crate::fuchsian::volume::group_area;
use crate::fuchsian::{GroupContext, DEFAULT_CENTER};
use crate::quat::lattice::{maximal_order, QuatLattice};
use crate::quat::principal::{principalize, NrdSign};
use crate::quat::splitting::{right_ideal_with_norm, ResidueSplitting};
use crate::quat::{QuatAlgebra, QuatElement};
use crate::spectral::{to_rational_matrix, LabeledOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub center: (f64, f64),
    pub domain: DomainOptions,
    /// Generators of an order to saturate to a maximal order.
    pub order_generators: Option<Vec<QuatElement>>,
    /// Height bound for the unit search; `None` uses the default.
    pub unit_height: Option<u64>,
    /// Per class index, units seeding the domain search.
    pub seeds: Vec<Vec<QuatElement>>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { center: DEFAULT_CENTER, domain: DomainOptions::default(), order_generators: None, unit_height: None, seeds: Vec::new() }
    }
}

/// One strict ideal class `[b]`.
#[derive(Clone, Debug)]
pub struct Component {
    pub class_index: usize,
    pub representative: FracIdeal,
    /// Right ideal of the base order with reduced norm `b`.
    pub j: QuatLattice,
    pub j_inverse: QuatLattice,
    /// Left order of `J`, the maximal order `O(1)_b`.
    pub order: QuatLattice,
    pub context: GroupContext,
    pub domain: FundamentalDomain,
    pub presentation: Presentation,
    pub cohomology: Cohomology,
}

#[derive(Clone, Debug)]
pub struct ComponentSystem {
    pub alg: QuatAlgebra,
    pub base_order: QuatLattice,
    pub units: UnitGroup,
    pub class_group: StrictClassGroup,
    /// Class of `m`, the kernel of the map to the ray class group with
    /// modulus the ramified real places.
    pub conjugation_class: usize,
    pub level: FracIdeal,
    pub level_primes: Vec<PrimeIdeal>,
    pub ramified: Vec<PrimeIdeal>,
    pub module: CoinducedModule,
    pub components: Vec<Component>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    Hecke,
    Conjugation,
    AtkinLehner,
    Diamond,
}

/// An operator on `H` acting on row vectors, with its block routing.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub label: String,
    pub matrix: Matrix<El>,
    /// `(source, target)` component pairs of the possibly nonzero blocks.
    pub routing: Vec<(usize, usize)>,
}

impl ComponentSystem {
    pub fn field(&self) -> &CoeffField {
        self.module.field()
    }

    pub fn class_of(&self, i: &FracIdeal) -> Result<usize> {
        self.class_group.discrete_log(&self.alg.field, &self.units, i)
    }

    fn check_prime(&self, p: &PrimeIdeal) -> Result<()> {
        if self.ramified.contains(p) || self.level_primes.contains(p) {
            return Err(Error::BadPrime(format!("prime of norm {} divides the discriminant or level", p.norm())));
        }
        Ok(())
    }

    fn assemble(&self, kind: OperatorKind, label: String, blocks: Vec<(usize, usize, Matrix<El>)>) -> OperatorMatrix {
        let k = self.field();
        let mut m = Matrix::from_fn(self.dim, self.dim, |_, _| k.zero());
        let mut routing = Vec::new();
        for (s, t, b) in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(self.offsets[s] + i, self.offsets[t] + j, b.get(i, j).clone());
                }
            }
            routing.push((s, t));
        }
        OperatorMatrix { kind, label, matrix: m, routing }
    }

    /// Row `i` of the block: the coordinates of `f_i | op` where
    /// `(f_i | op)(γ_j) = Σ_a f_i(δ_{a,j})^{α_a}`.
    /// Row `f` maps to the cocycle `g -> sum f(w) * alphas[i]` over the pairs `(i, w)` for `g`.
    fn block_from_words(&self, s: usize, t: usize, alphas: &[Action], words: &[Vec<(usize, Word)>]) -> Matrix<El> {
        let k = self.field();
        let src = &self.components[s].cohomology;
        let dst = &self.components[t].cohomology;
        let d = src.module_dim;
        let rows: Vec<Vec<El>> = src
            .basis
            .iter()
            .map(|f| {
                let mut vals = Vec::with_capacity(words.len() * d);
                for per_gen in words {
                    let mut acc = vec![k.zero(); d];
                    for (i, w) in per_gen {
                        let v = alphas[*i].apply(k, &src.evaluate(f, w));
                        for (x, y) in acc.iter_mut().zip(&v) {
                            *x = k.add(x, y);
                        }
                    }
                    vals.extend(acc);
                }
                debug_assert!(dst.is_cocycle(&vals, &self.components[t].presentation.relations));
                dst.coordinates(&vals)
            })
            .collect();
        Matrix::from_fn(src.dim(), dst.dim(), |i, j| rows[i][j].clone())
    }

    fn word(&self, comp: usize, x: &QuatElement) -> Result<Word> {
        let c = &self.components[comp];
        if !c.order.contains(x) {
            return Err(Error::OrderMismatch("connecting element is not in the source order".into()));
        }
        reduce_word(&c.context, &c.domain, &c.presentation, x)
    }

    /// `(f | W)(γ) = f(μ γ μ^-1)^μ` for `μ` generating `J_s J_t^-1 X`.
    fn conjugation_block(&self, s: usize, t: usize, mu: &QuatElement) -> Result<Matrix<El>> {
        let alg = &self.alg;
        let mu_inv = alg.inv(mu);
        let ct = &self.components[t];
        let mut words = Vec::new();
        for g in &ct.presentation.generators {
            let d = alg.mul(&alg.mul(mu, &g.quat), &mu_inv);
            words.push(vec![(0, self.word(s, &d)?)]);
        }
        let alpha = self.module.action(alg, mu)?;
        Ok(self.block_from_words(s, t, &[alpha], &words))
    }

    fn connecting_lattice(&self, s: usize, t: usize) -> QuatLattice {
        self.components[s].j.mul(&self.alg, &self.components[t].j_inverse)
    }
}

/// Left ideals `I_a = O ι_p^-1([[x, y], [0, 0]]) + p O` for `a = (x:y)`.
pub fn ideals_ia(alg: &QuatAlgebra, order: &QuatLattice, split: &ResidueSplitting) -> Vec<QuatLattice> {
    let k = split.residue_field();
    let q = split.prime.norm() as usize;
    let po = order.scale_ideal(alg, &split.prime.ideal);
    (0..=q)
        .map(|a| {
            let (x, y) = local_point(k, a);
            let m = [[x, y], [k.zero(), k.zero()]];
            let e = split.preimage(alg, &m);
            order.right_mul(alg, &e).sum(&po)
        })
        .collect()
}

pub fn build_components(alg: &QuatAlgebra, level: &FracIdeal, weights: &[u32], avoid: &FracIdeal, opts: &BuildOptions) -> Result<ComponentSystem> {
    let fld = &alg.field;
    let units = match opts.unit_height {
        Some(h) => unit_group_with_bound(fld, h)?,
        None => unit_group(fld)?,
    };
    let start = match &opts.order_generators {
        Some(g) => Some(QuatLattice::from_elements(alg, g).ok_or_else(|| Error::Config("order generators are not of full rank".into()))?),
        None => None,
    };
    let base_order = maximal_order(alg, start.as_ref())?;
    let ramified = alg.ramified_primes()?;
    let disc = alg.discriminant()?;
    if !level.is_integral() || !level.is_coprime(&disc) {
        return Err(Error::NonCoprimeLevel);
    }
    let mut level_primes = Vec::new();
    for (p, e) in factor_ideal(fld, level)? {
        if e != 1 {
            return Err(Error::Unsupported("level must be squarefree".into()));
        }
        level_primes.push(p);
    }
    level_primes.sort_by(|a, b| (a.norm(), &a.ideal.lattice.basis).cmp(&(b.norm(), &b.ideal.lattice.basis)));
    let weight = WeightModule::new(alg, weights)?;
    let level_structure = if level_primes.is_empty() {
        None
    } else {
        let sp = level_primes.iter().map(|p| ResidueSplitting::new(alg, &base_order, p)).collect::<Result<Vec<_>>>()?;
        Some(LevelStructure::new(sp))
    };
    let module = CoinducedModule { weight, level: level_structure };
    let avoid_all = avoid.mul(fld, &disc).mul(fld, level);
    let class_group = strict_class_group(fld, &units, &avoid_all)?;
    let conjugation_class = crate::field::ray_kernel_class(fld, &units, &class_group, alg.split_place)?;
    let ram_norms: Vec<u64> = ramified.iter().map(|p| p.norm()).collect();
    let mut components = Vec::new();
    let mut offsets = Vec::new();
    let mut dim = 0;
    for (ci, rep) in class_group.representatives.iter().enumerate() {
        let j = right_ideal_with_norm(alg, &base_order, rep)?;
        let order = j.left_order(alg);
        let j_inverse = j.inverse(alg);
        let context = GroupContext::new(alg, &order, &units, opts.center)?;
        let area = group_area(fld, &ram_norms, context.nrd_reps.len())?;
        let mut dopts = opts.domain.clone();
        if let Some(seeds) = opts.seeds.get(ci) {
            dopts.seeds.extend(seeds.iter().cloned());
        }
        let (domain, presentation) = fundamental_domain(&context, area, &dopts)?;
        let actions = presentation.generators.iter().map(|g| module.action(alg, &g.quat)).collect::<Result<Vec<_>>>()?;
        let cohomology = h1_basis(module.field(), actions, &presentation.relations);
        for r in &presentation.relations {
            let a = cohomology.word_action(r);
            if a != Action::identity(module.field(), module.labels(), module.weight.dim()) {
                return Err(Error::OrderMismatch("a relation acts nontrivially on the coefficient module".into()));
            }
        }
        offsets.push(dim);
        dim += cohomology.dim();
        components.push(Component {
            class_index: ci,
            representative: rep.clone(),
            j,
            j_inverse,
            order,
            context,
            domain,
            presentation,
            cohomology,
        });
    }
    Ok(ComponentSystem {
        alg: alg.clone(),
        base_order,
        units,
        class_group,
        conjugation_class,
        level: level.clone(),
        level_primes,
        ramified,
        module,
        components,
        offsets,
        dim,
    })
}

/// Label `(N, two-element form)` of a prime.
pub fn prime_label(alg: &QuatAlgebra, p: &PrimeIdeal) -> String {
    format!("{}:{}", p.norm(), p.ideal.format(&alg.field, "w").replace(' ', ""))
}

pub fn hecke_operator(sys: &ComponentSystem, p: &PrimeIdeal) -> Result<OperatorMatrix> {
    sys.check_prime(p)?;
    let alg = &sys.alg;
    let cp = sys.class_of(&p.ideal)?;
    let mut blocks = Vec::new();
    for s in 0..sys.components.len() {
        let t = sys.class_group.table[cp][s];
        let ct = &sys.components[t];
        let split = ResidueSplitting::new(alg, &ct.order, p)?;
        let p1 = P1::new(vec![split.residue_field().clone()]);
        let conn = sys.connecting_lattice(s, t);
        let mut pis = Vec::new();
        for ia in ideals_ia(alg, &ct.order, &split) {
            let ip = conn.mul(alg, &ia);
            pis.push(principalize(alg, &ip, NrdSign::Positive)?);
        }
        let pi_inv: Vec<QuatElement> = pis.iter().map(|x| alg.inv(x)).collect();
        let mut words = Vec::new();
        for g in &ct.presentation.generators {
            let img = split.image(alg, &g.quat)?;
            let mut per = Vec::with_capacity(pis.len());
            for a in 0..pis.len() {
                let b = p1.act(a, std::slice::from_ref(&img));
                let d = alg.mul(&alg.mul(&pis[a], &g.quat), &pi_inv[b]);
                per.push((b, sys.word(s, &d)?));
            }
            words.push(per);
        }
        let alphas = pis.iter().map(|x| sys.module.action(alg, x)).collect::<Result<Vec<_>>>()?;
        blocks.push((s, t, sys.block_from_words(s, t, &alphas, &words)));
    }
    Ok(sys.assemble(OperatorKind::Hecke, prime_label(alg, p), blocks))
}

pub fn conjugation_operator(sys: &ComponentSystem) -> Result<OperatorMatrix> {
    let alg = &sys.alg;
    let inv_m = sys.class_group.inverse_index(sys.conjugation_class);
    let mut blocks = Vec::new();
    for s in 0..sys.components.len() {
        let t = sys.class_group.table[s][inv_m];
        let mu = principalize(alg, &sys.connecting_lattice(s, t), NrdSign::Negative)?;
        blocks.push((s, t, sys.conjugation_block(s, t, &mu)?));
    }
    Ok(sys.assemble(OperatorKind::Conjugation, "W_inf".into(), blocks))
}

/// The two-sided ideal of reduced norm `p` of a maximal order, for `p`
/// ramified in the algebra.
pub fn two_sided_ideal(alg: &QuatAlgebra, order: &QuatLattice, p: &PrimeIdeal) -> Result<QuatLattice> {
    let fld = &alg.field;
    let basis = order.basis();
    let po = order.scale_ideal(alg, &p.ideal);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20_000 {
        let mut x = alg.zero();
        for b in &basis {
            let c: i64 = rng.gen_range(-2..=2);
            if c != 0 {
                x = alg.add(&x, &alg.scale_int(b, &c.into()));
            }
        }
        if x.is_zero() {
            continue;
        }
        let nrd = alg.nrd(&x);
        if p.valuation(fld, &nrd) == 1 {
            let ideal = order.right_mul(alg, &x).sum(&po);
            if ideal.nrd(alg) == p.ideal {
                return Ok(ideal);
            }
        }
    }
    Err(Error::NoGenerator { what: "element of odd valuation in the two-sided ideal".into(), bound: 20_000 })
}

pub fn atkin_lehner_operator(sys: &ComponentSystem, p: &PrimeIdeal) -> Result<OperatorMatrix> {
    if sys.level_primes.contains(p) {
        return Err(Error::Unsupported("Atkin-Lehner operators at primes dividing the level".into()));
    }
    if !sys.ramified.contains(p) {
        return Err(Error::BadPrime("Atkin-Lehner prime must divide the discriminant".into()));
    }
    let alg = &sys.alg;
    let cp = sys.class_of(&p.ideal)?;
    let mut blocks = Vec::new();
    for s in 0..sys.components.len() {
        let t = sys.class_group.table[cp][s];
        let pt = two_sided_ideal(alg, &sys.components[t].order, p)?;
        let lat = sys.connecting_lattice(s, t).mul(alg, &pt);
        let nu = principalize(alg, &lat, NrdSign::Positive)?;
        blocks.push((s, t, sys.conjugation_block(s, t, &nu)?));
    }
    Ok(sys.assemble(OperatorKind::AtkinLehner, prime_label(alg, p), blocks))
}

/// The action of the central ideal `a` (coprime to the level): component
/// `[b]` goes to `[a^2 b]` by the generator of `J_s J_t^-1 a` with positive
/// reduced norm.
pub fn diamond_operator(sys: &ComponentSystem, a: &FracIdeal) -> Result<OperatorMatrix> {
    if !a.is_coprime(&sys.level) {
        return Err(Error::BadPrime("central ideal must be coprime to the level".into()));
    }
    let alg = &sys.alg;
    let fld = &alg.field;
    let ca = sys.class_of(&a.mul(fld, a))?;
    let mut blocks = Vec::new();
    for s in 0..sys.components.len() {
        let t = sys.class_group.table[ca][s];
        let lat = sys.connecting_lattice(s, t).scale_ideal(alg, a);
        let mu = principalize(alg, &lat, NrdSign::Positive)?;
        blocks.push((s, t, sys.conjugation_block(s, t, &mu)?));
    }
    Ok(sys.assemble(OperatorKind::Diamond, format!("S:{}", a.format(fld, "w").replace(' ', "")), blocks))
}

/// A subspace of row vectors with a coordinate map.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: Vec<Vec<El>>,
    pivots: Vec<usize>,
    projection: Matrix<El>,
}

impl Subspace {
    pub fn new(k: &CoeffField, basis: Vec<Vec<El>>) -> Subspace {
        if basis.is_empty() {
            return Subspace { basis, pivots: Vec::new(), projection: Matrix::from_rows(Vec::new()) };
        }
        let m = Matrix::from_rows(basis.clone());
        let (_, pivots) = rref(k, &m);
        let sub = m.submatrix(&(0..m.rows).collect::<Vec<_>>(), &pivots);
        let projection = inverse(k, &sub).expect("independent basis");
        Subspace { basis, pivots, projection }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coordinates(&self, k: &CoeffField, v: &[El]) -> Vec<El> {
        let n = self.dim();
        let mut c = vec![k.zero(); n];
        for (i, &col) in self.pivots.iter().enumerate() {
            if k.is_zero(&v[col]) {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                *cj = k.add(cj, &k.mul(&v[col], self.projection.get(i, j)));
            }
        }
        c
    }

    /// Matrix of an operator preserving the subspace, on its basis.
    pub fn restrict(&self, k: &CoeffField, op: &Matrix<El>) -> Matrix<El> {
        let rows: Vec<Vec<El>> = self.basis.iter().map(|b| self.coordinates(k, &vec_mat(k, b, op))).collect();
        Matrix::from_fn(self.dim(), self.dim(), |i, j| rows[i][j].clone())
    }
}

pub fn vec_mat(k: &CoeffField, v: &[El], m: &Matrix<El>) -> Vec<El> {
    let mut out = vec![k.zero(); m.cols];
    for (i, x) in v.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let y = m.get(i, j);
            if !k.is_zero(y) {
                *o = k.add(o, &k.mul(x, y));
            }
        }
    }
    out
}

/// The `+1`-eigenspace of `W∞`.
pub fn plus_subspace(sys: &ComponentSystem, w: &OperatorMatrix) -> Subspace {
    let k = sys.field();
    let m = mat_sub(k, &w.matrix, &identity(k, sys.dim));
    Subspace::new(k, kernel(k, &m.transpose()))
}

fn routes_to_self(op: &OperatorMatrix, s: usize) -> Option<usize> {
    op.routing.iter().find(|(a, _)| *a == s).map(|(_, t)| *t)
}

/// Operators on a `W∞`-stable subspace that preserve every component: the
/// component projections (when `W∞` preserves components), the Hecke
/// operators of trivial class and the products `T T'` whose routings compose
/// to the identity, all over `Q`.
pub fn component_preserving(sys: &ComponentSystem, sub: &Subspace, w: &OperatorMatrix, ops: &[OperatorMatrix]) -> Vec<LabeledOperator> {
    let k = sys.field();
    let n = sys.components.len();
    let mut out = Vec::new();
    if w.routing.iter().all(|(s, t)| s == t) && n > 1 {
        for s in 0..n {
            let m = Matrix::from_fn(sys.dim, sys.dim, |i, j| {
                let inside = i == j && i >= sys.offsets[s] && i < sys.offsets[s] + sys.components[s].cohomology.dim();
                if inside { k.one() } else { k.zero() }
            });
            out.push(LabeledOperator { label: format!("P[{s}]"), norm: 1, matrix: to_rational_matrix(k, &sub.restrict(k, &m)) });
        }
    }
    let diagonal = |op: &OperatorMatrix| (0..n).all(|s| routes_to_self(op, s) == Some(s));
    let hecke: Vec<&OperatorMatrix> = ops.iter().filter(|o| o.kind == OperatorKind::Hecke).collect();
    for op in hecke.iter().filter(|o| diagonal(o)) {
        out.push(LabeledOperator { label: op.label.clone(), norm: label_norm(&op.label), matrix: to_rational_matrix(k, &sub.restrict(k, &op.matrix)) });
    }
    let moving: Vec<&&OperatorMatrix> = hecke.iter().filter(|o| !diagonal(o)).collect();
    for (i, a) in moving.iter().enumerate() {
        for b in &moving[i..] {
            let composed = (0..n).all(|s| routes_to_self(a, s).and_then(|t| routes_to_self(b, t)) == Some(s));
            if !composed {
                continue;
            }
            let m = mat_mul(k, &a.matrix, &b.matrix);
            out.push(LabeledOperator {
                label: format!("{}*{}", a.label, b.label),
                norm: label_norm(&a.label) * label_norm(&b.label),
                matrix: to_rational_matrix(k, &sub.restrict(k, &m)),
            });
        }
    }
    out
}

fn label_norm(label: &str) -> u64 {
    label.split(':').next().and_then(|x| x.parse().ok()).unwrap_or(1)
}

/// True if every nonzero block lies on the declared routing.
pub fn routing_holds(sys: &ComponentSystem, op: &OperatorMatrix) -> bool {
    let k = sys.field();
    let n = sys.components.len();
    for s in 0..n {
        for t in 0..n {
            if op.routing.contains(&(s, t)) {
                continue;
            }
            let (r0, c0) = (sys.offsets[s], sys.offsets[t]);
            let (rd, cd) = (sys.components[s].cohomology.dim(), sys.components[t].cohomology.dim());
            for i in 0..rd {
                for j in 0..cd {
                    if !k.is_zero(op.matrix.get(r0 + i, c0 + j)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::{char_poly, mat_mul};
    use crate::field::factor_rational_prime;
    use crate::quat::tests::cubic_algebra;

    fn rational_char_poly(sys: &ComponentSystem, m: &Matrix<El>) -> Vec<i64> {
        let k = sys.field();
        char_poly(k, m).iter().map(|c| k.to_rational(c).unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn cubic_operators() {
        let alg = cubic_algebra();
        let f = &alg.field;
        let p3 = factor_rational_prime(f, 3).unwrap().into_iter().find(|p| p.norm() == 3).unwrap();
        let sys = build_components(&alg, &FracIdeal::unit(f), &[2, 2, 2], &p3.ideal, &BuildOptions::default()).unwrap();
        assert_eq!(sys.components.len(), 2);
        for c in &sys.components {
            assert_eq!(c.presentation.genus, 1);
            assert_eq!(c.presentation.elliptic_orders, vec![2, 2, 2, 2, 2, 3, 3]);
        }
        assert_eq!(sys.dim, 4);
        let t3 = hecke_operator(&sys, &p3).unwrap();
        assert!(routing_holds(&sys, &t3));
        assert_eq!(rational_char_poly(&sys, &t3.matrix), vec![16, 0, -8, 0, 1]);
        let p5 = factor_rational_prime(f, 5).unwrap().into_iter().find(|p| p.norm() == 5).unwrap();
        let t5 = hecke_operator(&sys, &p5).unwrap();
        assert_eq!(t5.matrix, identity(sys.field(), 4));
        let w = conjugation_operator(&sys).unwrap();
        assert_eq!(rational_char_poly(&sys, &w.matrix), vec![1, 0, -2, 0, 1]);
        let k = sys.field();
        assert_eq!(mat_mul(k, &w.matrix, &w.matrix), identity(k, 4));
        assert_eq!(mat_mul(k, &w.matrix, &t3.matrix), mat_mul(k, &t3.matrix, &w.matrix));
        let plus = plus_subspace(&sys, &w);
        assert_eq!(plus.dim(), 2);
        assert_eq!(rational_char_poly(&sys, &plus.restrict(k, &t3.matrix)), vec![-4, 0, 1]);
    }
}
