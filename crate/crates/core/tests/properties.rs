use aodkit::*;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (-8i64..=8, -8i64..=8, -8i64..=8, -8i64..=8, 0u32..4).prop_map(|(a, b, c, d, e)| ExactScalar::new(a, b, c, d, e))
}

fn nonzero_scalar() -> impl Strategy<Value = ExactScalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(scalar(), rows * cols).prop_map(move |e| ExactMatrix::from_entries(rows, cols, e).unwrap())
}

fn signed_perm(n: usize) -> impl Strategy<Value = SignedPermutation> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(prop::bool::ANY, n)).prop_map(
        |(cols, signs)| {
            SignedPermutation::new(cols.into_iter().zip(signs).map(|(c, s)| (c, if s { 1 } else { -1 })).collect())
                .unwrap()
        },
    )
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm() + b.norm())
}

proptest! {
    #[test]
    fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a - a, ExactScalar::ZERO);
        prop_assert_eq!((a * b).conj(), a.conj() * b.conj());
        prop_assert!(close((a * b).to_complex(), a.to_complex() * b.to_complex()));
        prop_assert!(close((a + b).to_complex(), a.to_complex() + b.to_complex()));
    }

    #[test]
    fn canonical_form(a in scalar()) {
        let [x, y, z, w, e] = a.components();
        prop_assert_eq!(ExactScalar::new(x, y, z, w, e as u32), a);
        if !a.is_zero() && e > 0 {
            prop_assert!([x, y, z, w].iter().any(|v| v % 2 != 0));
        }
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExactScalar>(&json).unwrap(), a);
    }

    #[test]
    fn scaling_by_powers_of_sqrt2(a in scalar(), k in -4i32..4) {
        let up = a.scale_sqrt2_pow(k);
        prop_assert_eq!(up.scale_sqrt2_pow(-k), a);
        prop_assert!(close(up.to_complex(), a.to_complex() * 2f64.sqrt().powi(k)));
    }

    #[test]
    fn real_sqrt2_order_matches_floats(a in scalar(), b in scalar()) {
        let (x, y) = (a.re(), b.re());
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x < y, fx < fy);
        }
        if let Some(inv) = x.recip() {
            prop_assert_eq!(x * inv, RealSqrt2::from_ratio(Ratio::from_integer(1)));
        }
    }

    #[test]
    fn hermitian_of_product(x in matrix(3, 2), y in matrix(2, 4)) {
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.hermitian(), y.hermitian().mul(&x.hermitian()).unwrap());
    }

    #[test]
    fn product_is_associative(x in matrix(2, 3), y in matrix(3, 2), z in matrix(2, 2)) {
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        // float oracle
        let fx = x.to_complex_rows();
        let fy = y.to_complex_rows();
        let fz = z.to_complex_rows();
        for i in 0..2 {
            for l in 0..2 {
                let mut v = Complex64::new(0.0, 0.0);
                for a in 0..3 {
                    for b in 0..2 {
                        v += fx[i][a] * fy[a][b] * fz[b][l];
                    }
                }
                prop_assert!(close(v, left[(i, l)].to_complex()));
            }
        }
    }

    #[test]
    fn kron_laws(a in matrix(2, 2), b in matrix(2, 1), c in matrix(2, 2), d in matrix(1, 2)) {
        prop_assert_eq!(a.kron(&b).hermitian(), a.hermitian().kron(&b.hermitian()));
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_transforms_preserve_orthogonality_and_power(
        idx in 0usize..FIXTURE_NAMES.len(),
        left8 in signed_perm(8), right8 in signed_perm(8),
        left4 in signed_perm(4), right4 in signed_perm(4),
    ) {
        let code = fixture(FIXTURE_NAMES[idx]).unwrap();
        let tr = if code.n_t() == 8 {
            MonomialTransform { left: left8, right: right8 }
        } else {
            MonomialTransform { left: left4, right: right4 }
        };
        let moved = apply_transform(&code, &tr).unwrap();
        prop_assert!(verify_ostbc(&moved).passed);
        let consts = table_constellations(&code.label, code.k());
        let a = power_report(&code, &consts).unwrap();
        let b = power_report(&moved, &consts).unwrap();
        prop_assert_eq!(a.peak_ave, b.peak_ave);
        prop_assert_eq!(a.ave_min, b.ave_min);
        prop_assert_eq!(a.p_o, b.p_o);
    }

    #[test]
    fn power_metrics_are_scale_invariant(idx in 0usize..FIXTURE_NAMES.len(), s in nonzero_scalar()) {
        let code = fixture(FIXTURE_NAMES[idx]).unwrap();
        let scaled = code.map_entries(|f| f.scale(s));
        let consts = table_constellations(&code.label, code.k());
        let a = power_report(&code, &consts).unwrap();
        let b = power_report(&scaled, &consts).unwrap();
        prop_assert_eq!(a.peak_ave, b.peak_ave);
        prop_assert_eq!(a.ave_min, b.ave_min);
        prop_assert_eq!(a.p_o, b.p_o);
    }

    #[test]
    fn sign_perturbation_breaks_constructions(
        which in 0usize..4, member in 0usize..8, r in 0usize..8, c in 0usize..8,
    ) {
        let name = ["G8", "H8", "F8", "G4"][which];
        let (input, seed) = fixture_recipe(name).unwrap();
        let fam = catalog_family(input).unwrap();
        let mut out = match seed {
            Some(s) => construct1(&fam, &catalog_seed(s).unwrap()).unwrap(),
            None => construct2(&fam).unwrap(),
        };
        let n = out.order;
        let (r, c) = (r % n, c % n);
        let set = if member % 2 == 0 { &mut out.a_mats } else { &mut out.b_mats };
        let slot = (member / 2) % set.len();
        let m = &mut set[slot];
        prop_assume!(!m[(r, c)].is_zero());
        m[(r, c)] = -m[(r, c)];
        prop_assert!(!verify_af(&out).passed);
    }

    #[test]
    fn symbolic_evaluation_matches_floats(idx in 0usize..FIXTURE_NAMES.len(), xs in prop::collection::vec(scalar(), 4)) {
        let code = fixture(FIXTURE_NAMES[idx]).unwrap();
        let xs = &xs[..code.k()];
        let floats: Vec<Complex64> = xs.iter().map(ExactScalar::to_complex).collect();
        let exact = code.evaluate_exact(xs);
        for t in 0..code.p() {
            for m in 0..code.n_t() {
                prop_assert!(close(code.entry(t, m).evaluate(&floats), exact[(t, m)].to_complex()));
            }
        }
    }
}

#[test]
fn energy_accounting_is_exact() {
    // C^H C = ρ Σ|x_i|² I, so with unit-energy symbols the mean entry power is ρ·k/p
    for name in FIXTURE_NAMES {
        let code = fixture(name).unwrap();
        let rho = common_gram_scale(&code).unwrap();
        let consts = table_constellations(name, code.k());
        let rep = power_report(&code, &consts).unwrap();
        let want = rho.re() * RealSqrt2::from_ratio(Ratio::new(code.k() as i128, code.p() as i128));
        assert_eq!(rep.ave.exact().unwrap(), want, "{name}");
    }
}

#[test]
fn zero_fraction_of_th_ignores_constellation() {
    let th = fixture("TH").unwrap();
    for c in ["qpsk", "bpsk", "qpsk@45", "16qam", "8psk"] {
        let consts = vec![Constellation::parse(c).unwrap(); 4];
        assert_eq!(power_report(&th, &consts).unwrap().p_o, Ratio::new(1, 2), "{c}");
    }
}

#[test]
fn zero_free_fixtures_meet_the_type_bound() {
    for name in FIXTURE_NAMES {
        let code = fixture(name).unwrap();
        let rep = power_report(&code, &table_constellations(name, code.k())).unwrap();
        if rep.p_o == Ratio::from_integer(0) {
            assert!(rep.guideline_sum_ge_2n, "{name}");
        }
    }
}
