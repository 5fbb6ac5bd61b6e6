mod common;

use bredon::config_ring::{reduce, reduce_word, Parity, RingElement, RingParams, Strategy as Reduction};
use bredon::group_rep::{GroupSpec, Representation};
use bredon::linalg::Int;
use bredon::oc_assembly::{additive_free_chart, render_chart, AdditiveChart};
use bredon::point_cohomology::{group_at_degree, Degree, GradedGroup, PointCohomology};
use bredon::stirling::stirling_c;
use bredon::varchenko_gelfand::heaviside;
use common::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![(2u32..=12).prop_map(|n| GroupSpec::cyclic(n).unwrap()), Just(GroupSpec::sigma3())]
}

fn rep(g: &GroupSpec, max_mult: u32) -> impl Strategy<Value = Representation> {
    proptest::collection::vec(0..=max_mult, g.irreducibles.len()).prop_map(|mult| Representation { mult })
}

fn group_and_reps() -> impl Strategy<Value = (GroupSpec, Representation, Representation)> {
    group().prop_flat_map(|g| {
        let (a, b) = (rep(&g, 2), rep(&g, 2));
        (Just(g), a, b)
    })
}

fn ring_params() -> impl Strategy<Value = RingParams> {
    (2usize..=4, prop_oneof![Just((Parity::Even, 2u64)), Just((Parity::Even, 1)), Just((Parity::Odd, 1)), Just((Parity::Odd, 3))])
        .prop_map(|(k, (par, d))| RingParams::new(k, par, d).unwrap())
}

type Term = (i64, bool, Vec<(usize, usize)>);

fn terms(k: usize) -> impl Strategy<Value = Vec<Term>> {
    let gen = (1..=k, 1..k).prop_map(move |(i, j)| (i, if j >= i { j + 1 } else { j }));
    proptest::collection::vec((-3i64..=3, any::<bool>(), proptest::collection::vec(gen, 0..=2)), 1..=3)
}

fn element(p: RingParams, ts: &[Term]) -> RingElement {
    ts.iter().fold(RingElement::zero(p), |acc, (c, with_a, w)| {
        let mut x = reduce_word(p, w, Reduction::Leftmost).unwrap().scale(&Int::from(*c));
        if *with_a {
            x = RingElement::a(p).mul(&x).unwrap();
        }
        acc.add(&x).unwrap()
    })
}

fn ring_and_elements() -> impl Strategy<Value = (RingParams, Vec<Term>, Vec<Term>, Vec<Term>)> {
    ring_params().prop_flat_map(|p| (Just(p), terms(p.k), terms(p.k), terms(p.k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_of_sum_is_gcd((g, v, w) in group_and_reps()) {
        prop_assume!(!v.is_zero() && !w.is_zero());
        let d = g.d(&v.add(&w)).unwrap();
        prop_assert_eq!(d, num_integer::gcd(g.d(&v).unwrap(), g.d(&w).unwrap()));
    }

    #[test]
    fn odd_dimensional_d_divides_two((g, v, _) in group_and_reps()) {
        prop_assume!(g.dim(&v) % 2 == 1);
        prop_assert!(matches!(g.d(&v).unwrap(), 1 | 2));
    }

    #[test]
    fn euler_class_generates_order_d((g, v, _) in group_and_reps()) {
        prop_assume!(!v.is_zero() && g.dim(&v) <= 6);
        let grp = group_at_degree(&g, &Degree::from_rep(&v)).unwrap();
        let d = g.d(&v).unwrap() as u64;
        prop_assert_eq!(grp.invariant_factors(), if d == 1 { vec![] } else { vec![d] });
        if !v.contains_trivial() || g.dim(&v) > 1 {
            let minus = Degree::from_rep(&v).neg();
            prop_assert!(group_at_degree(&g, &minus).unwrap().is_trivial());
            let one_minus = minus.add(&Degree::trivial(&g, 1));
            if let Ok(h) = group_at_degree(&g, &one_minus) {
                prop_assert!(h.is_trivial(), "M^(1-V) = {}", h);
            }
        }
    }

    #[test]
    fn degree_round_trips(g in group(), seed in proptest::collection::vec(-9i64..=9, 8)) {
        let d = Degree { coeffs: seed[..g.rank()].to_vec() };
        prop_assert_eq!(Degree::parse(&g, &d.format(&g)).unwrap(), d);
    }

    #[test]
    fn invariant_factors_preserve_cardinality(orders in proptest::collection::vec(2u64..=12, 0..5)) {
        let g = GradedGroup::from_orders(&orders, "x");
        let prod: u64 = g.invariant_factors().iter().product();
        prop_assert_eq!(prod, orders.iter().product::<u64>());
        let f = g.invariant_factors();
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn ring_multiplication_is_associative((p, a, b, c) in ring_and_elements()) {
        let (x, y, z) = (element(p, &a), element(p, &b), element(p, &c));
        let lhs = x.mul(&y).unwrap().mul(&z).unwrap();
        let rhs = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_is_distributive_and_a_is_central((p, a, b, c) in ring_and_elements()) {
        let (x, y, z) = (element(p, &a), element(p, &b), element(p, &c));
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        let ra = RingElement::a(p);
        prop_assert_eq!(ra.mul(&x).unwrap(), x.mul(&ra).unwrap());
    }

    #[test]
    fn strategies_agree_and_display_reparses((p, a, b, _) in ring_and_elements()) {
        let (x, y) = (element(p, &a), element(p, &b));
        prop_assert_eq!(x.mul_with(&y, Reduction::Leftmost).unwrap(), x.mul_with(&y, Reduction::Rightmost).unwrap());
        prop_assert_eq!(reduce(p, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn specialization_is_a_ring_map((p, a, b, _) in ring_and_elements()) {
        let (x, y) = (element(p, &a), element(p, &b));
        let lhs = x.mul(&y).unwrap().vg_specialize().unwrap();
        let rhs = x.vg_specialize().unwrap().mul(&y.vg_specialize().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn heaviside_identities(k in 2usize..=5, i in 1usize..=5, j in 1usize..=5, m in prop_oneof![Just(0u64), Just(2), Just(3)]) {
        prop_assume!(i != j && i <= k && j <= k);
        let e = heaviside(k, i, j, m).unwrap();
        let f = heaviside(k, j, i, m).unwrap();
        prop_assert!(e.add(&f).unwrap().is_constant(1));
        prop_assert_eq!(e.mul(&e).unwrap(), e.clone());
        prop_assert!(e.mul(&f).unwrap().is_zero());
    }

    #[test]
    fn free_chart_entries_are_sums_of_shifted_point_groups(
        rep_ix in 0usize..3, k in 1usize..=4, x in -6i64..=6, y in -6i64..=6,
    ) {
        let g = GroupSpec::cyclic(2).unwrap();
        let v = g.parse_rep(["1+sigma", "1+2*sigma", "2+sigma"][rep_ix]).unwrap();
        let alpha = Degree { coeffs: vec![x - y, y] };
        let chart = additive_free_chart(&g, &v, k, std::slice::from_ref(&alpha)).unwrap();
        let pc = PointCohomology::new(&g).unwrap();
        let shift = Degree::from_rep(&v).sub(&Degree::trivial(&g, 1));
        let mut expect = Vec::new();
        for j in 0..k {
            let c = stirling_c(k, k - j).to_usize().unwrap();
            for o in pc.group_at(&alpha.sub(&shift.scale(j as i64))).unwrap().orders() {
                expect.extend(std::iter::repeat(o).take(c));
            }
        }
        prop_assert_eq!(sorted(chart.entries[0].group().unwrap().orders()), sorted(expect));
    }

    #[test]
    fn rendering_depends_only_on_json(rep_ix in 0usize..3, k in 1usize..=4) {
        let g = GroupSpec::cyclic(2).unwrap();
        let v = g.parse_rep(["1+sigma", "2*sigma", "3*sigma"][rep_ix]).unwrap();
        let w = bredon::oc_assembly::motivic_window(&g, (-2, 4), (-2, 3)).unwrap();
        let chart = if v.contains_trivial() {
            additive_free_chart(&g, &v, k, &w).unwrap()
        } else {
            bredon::oc_assembly::additive_sphere_chart(&g, &v, k, &w).unwrap()
        };
        let back: AdditiveChart = serde_json::from_str(&serde_json::to_string(&chart).unwrap()).unwrap();
        prop_assert_eq!(render_chart(&back), render_chart(&chart));
    }
}
