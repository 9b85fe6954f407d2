use proptest::prelude::*;
use shimura_core::arith::ring::{Field, Int, Rat};
use shimura_core::field::primes::factor_ideal;
use shimura_core::pipeline::config::{AlgebraSpec, JobConfig, PrimeSpec};
use shimura_core::quat::hilbert::{hilbert_symbol, hilbert_symbol_real};
use shimura_core::quat::lattice::maximal_order;
use shimura_core::{FieldElement, FracIdeal, NumberField, QuatAlgebra, QuatElement, QuatLattice};
use std::sync::OnceLock;

fn sqrt5() -> &'static NumberField {
    static F: OnceLock<NumberField> = OnceLock::new();
    F.get_or_init(|| NumberField::new(&[-1, -1, 1]).unwrap())
}

fn cubic() -> &'static (QuatAlgebra, QuatLattice) {
    static A: OnceLock<(QuatAlgebra, QuatLattice)> = OnceLock::new();
    A.get_or_init(|| {
        let fld = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let a = fld.from_poly_i64(&[1, 1]);
        let b = fld.from_poly_i64(&[-1]);
        let alg = QuatAlgebra::new(fld, a, b).unwrap();
        let o = maximal_order(&alg, None).unwrap();
        (alg, o)
    })
}

fn element(fld: &NumberField, c: &[i64]) -> FieldElement {
    fld.from_coords_i64(c)
}

fn order_element(alg: &QuatAlgebra, o: &QuatLattice, c: &[i64]) -> QuatElement {
    let mut x = alg.zero();
    for (b, &k) in o.basis().iter().zip(c) {
        x = alg.add(&x, &alg.scale_int(b, &Int::from(k)));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hilbert_symbols_satisfy_the_product_formula(a in prop::collection::vec(-9i64..=9, 2), b in prop::collection::vec(-9i64..=9, 2)) {
        let fld = sqrt5();
        let (a, b) = (element(fld, &a), element(fld, &b));
        prop_assume!(!fld.is_zero(&a) && !fld.is_zero(&b));
        let two = fld.from_int(&Int::from(2));
        let n = FracIdeal::from_generators(fld, &[fld.mul(&two, &fld.mul(&a, &b))]).unwrap();
        let mut product = 1;
        for (p, _) in factor_ideal(fld, &n).unwrap() {
            product *= hilbert_symbol(fld, &a, &b, &p).unwrap();
        }
        for v in 0..fld.degree {
            product *= hilbert_symbol_real(fld, &a, &b, v).unwrap();
        }
        prop_assert_eq!(product, 1);
    }

    #[test]
    fn reduced_norm_is_multiplicative(x in prop::collection::vec(-4i64..=4, 12), y in prop::collection::vec(-4i64..=4, 12)) {
        let (alg, o) = cubic();
        let (x, y) = (order_element(alg, o, &x), order_element(alg, o, &y));
        let fld = &alg.field;
        prop_assert_eq!(alg.nrd(&alg.mul(&x, &y)), fld.mul(&alg.nrd(&x), &alg.nrd(&y)));
        prop_assert_eq!(alg.mul(&x, &alg.conj(&x)), alg.scalar(&alg.nrd(&x)));
    }

    #[test]
    fn ideals_times_their_conjugates_are_norms(x in prop::collection::vec(-3i64..=3, 12), y in prop::collection::vec(-3i64..=3, 12), n in 2i64..=5) {
        let (alg, o) = cubic();
        let (x, y) = (order_element(alg, o, &x), order_element(alg, o, &y));
        prop_assume!(!alg.field.is_zero(&alg.nrd(&x)) && !alg.field.is_zero(&alg.nrd(&y)));
        let scalar = alg.scalar(&alg.field.from_int(&Int::from(n)));
        let i = o.left_mul(alg, &x).sum(&o.left_mul(alg, &scalar));
        let j = o.right_mul(alg, &y).sum(&o.right_mul(alg, &scalar));
        let (ni, nj) = (i.nrd(alg), j.nrd(alg));
        prop_assert_eq!(i.mul(alg, &j).nrd(alg), ni.mul(&alg.field, &nj));
        prop_assert_eq!(j.mul(alg, &j.conj(alg)), o.scale_ideal(alg, &nj));
        prop_assert_eq!(i.conj(alg).mul(alg, &i), o.scale_ideal(alg, &ni));
    }
}

fn rat_vec() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-20i64..=20, 1i64..=4), 1..=3).prop_map(|v| v.into_iter().map(|(n, d)| Rat::new(n.into(), d.into())).collect())
}

fn prime_spec() -> impl Strategy<Value = PrimeSpec> {
    (2u64..100, rat_vec()).prop_map(|(p, element)| PrimeSpec { p, element })
}

fn job_config() -> impl Strategy<Value = JobConfig> {
    (2usize..=3).prop_flat_map(|n| {
        let algebra = prop_oneof![
            (rat_vec(), rat_vec()).prop_map(|(a, b)| AlgebraSpec::Explicit { a, b }),
            prop::collection::vec(prime_spec(), 0..3).prop_map(|ramified| AlgebraSpec::Auto { ramified }),
        ];
        (
            prop::collection::vec(-30i64..=30, n).prop_map(|mut p| {
                p.push(1);
                p
            }),
            prop::option::of(Just((0..n).rev().collect::<Vec<usize>>())),
            prop::option::of(0..n),
            algebra,
            prop::collection::vec(rat_vec(), 0..3),
            prop::collection::vec((1u32..5).prop_map(|k| 2 * k), n),
            prop::option::of(1u64..200),
            prop::collection::vec(prime_spec(), 0..3),
            (64u32..512, prop::option::of(1u64..20), prop::option::of(1.0f64..1e4), 1usize..40),
            (prop::option::of("[a-z]{1,8}\\.txt"), prop::option::of("[a-z]{1,8}\\.svg")),
        )
    })
    .prop_map(|(poly, places_order, split_index, algebra, level, weight, norm_bound, prime_list, (precision_bits, unit_height, enum_bound, factor_degree), (output_path, svg_path))| JobConfig {
        poly,
        places_order,
        split_index,
        algebra,
        level,
        weight,
        norm_bound,
        prime_list,
        precision_bits,
        unit_height,
        enum_bound,
        factor_degree,
        output_path,
        svg_path,
    })
}

proptest! {
    #[test]
    fn configurations_round_trip(cfg in job_config()) {
        let text = cfg.emit();
        let back = JobConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.emit(), text);
    }
}
