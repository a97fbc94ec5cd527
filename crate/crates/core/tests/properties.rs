use num_complex::Complex64;
use proptest::prelude::*;

use randdyn::io::{read_cloud_csv, write_cloud_csv};
use randdyn::markov::t_infinity_exact;
use randdyn::scenes;
use randdyn::staircase::{devils_staircase, lebesgue_singular};
use randdyn::thermo::hoelder_entropy;
use randdyn::{EscapeParams, GeneratorSystem, PointCloud, Polynomial, RandomModel};

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(complex(2.0), 3..=max_degree + 1).prop_filter_map("leading coefficient too small", |c| {
        (c.last().unwrap().norm() > 0.1).then(|| Polynomial::new(c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_obeys_chain_rule(p in polynomial(3), q in polynomial(3), z in complex(1.0)) {
        let pq = p.compose(&q).unwrap();
        let (qz, dq) = q.eval_with_derivative(z);
        let (pqz, dpq) = pq.eval_with_derivative(z);
        let (pz, dp) = p.eval_with_derivative(qz);
        prop_assert!((pqz - pz).norm() <= 1e-9 * (1.0 + pz.norm()));
        prop_assert!((dpq - dp * dq).norm() <= 1e-9 * (1.0 + (dp * dq).norm()));
    }

    #[test]
    fn preimages_map_back(p in polynomial(4), w in complex(3.0)) {
        let pre = p.preimages(w).unwrap();
        prop_assert_eq!(pre.len(), p.degree());
        let scale = p.coeff_scale().max(1.0) * (1.0 + w.norm());
        for z in pre {
            prop_assert!((p.eval(z) - w).norm() <= 1e-8 * scale, "{} -> {}", z, p.eval(z));
        }
    }

    #[test]
    fn cantor_symmetry_and_order(x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let (a, b) = (devils_staircase(x, 40), devils_staircase(1.0 - x, 40));
        prop_assert!((a.mid() + b.mid() - 1.0).abs() <= a.width() + b.width() + 1e-9);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(devils_staircase(lo, 40).lo <= devils_staircase(hi, 40).hi);
    }

    #[test]
    fn lebesgue_self_affinity(x in 0.0f64..1.0, a in 0.05f64..0.95) {
        // ψ(x/2) = a ψ(x) and ψ((1+x)/2) = a + (1-a) ψ(x).
        let v = lebesgue_singular(x, a, 50).unwrap();
        let left = lebesgue_singular(x / 2.0, a, 51).unwrap();
        let right = lebesgue_singular((1.0 + x) / 2.0, a, 51).unwrap();
        let slack = v.width() + 1e-12;
        prop_assert!((left.mid() - a * v.mid()).abs() <= slack + left.width());
        prop_assert!((right.mid() - (a + (1.0 - a) * v.mid())).abs() <= slack + right.width());
    }

    #[test]
    fn entropy_exponent_ignores_generator_order(p in 0.02f64..0.98, omega in 0.0f64..2.0) {
        let sys = scenes::dc1_system();
        let forward = RandomModel::new(sys.clone(), vec![p, 1.0 - p]).unwrap();
        let reversed_sys = GeneratorSystem::new(sys.generators().iter().rev().cloned().collect()).unwrap();
        let reversed = RandomModel::new(reversed_sys, vec![1.0 - p, p]).unwrap();
        let (u, v) = (hoelder_entropy(&forward, omega).unwrap(), hoelder_entropy(&reversed, omega).unwrap());
        prop_assert!((u - v).abs() <= 1e-14);
        prop_assert!(u > 0.0 && u <= std::f64::consts::LN_2 / 4f64.ln() + 1e-12);
    }

    #[test]
    fn escape_probability_is_invariant_under_the_averaging_operator(z in complex(2.5), p in 0.1f64..0.9) {
        let model = scenes::dc1_model(p);
        let params = EscapeParams::certified(model.system(), Some(scenes::dc1_trap()), 14).unwrap();
        let t = t_infinity_exact(z, &model, &params, 14);
        prop_assert!(t.lo >= 0.0 && t.hi <= 1.0);
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (h, w) in model.system().generators().iter().zip(model.weights()) {
            let child = t_infinity_exact(h.eval(z), &model, &params, 13);
            lo += w * child.lo;
            hi += w * child.hi;
        }
        prop_assert!(lo <= t.hi + 1e-12 && t.lo <= hi + 1e-12, "{} vs [{}, {}]", t, lo, hi);
    }

    #[test]
    fn cloud_csv_round_trip(points in prop::collection::vec((complex(5.0), 0usize..3), 1..40)) {
        let (zs, prov): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        let cloud = PointCloud::uniform(zs, prov).unwrap();
        let mut buf = Vec::new();
        write_cloud_csv(&mut buf, &cloud).unwrap();
        let back = read_cloud_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.points, cloud.points);
        prop_assert_eq!(back.provenance, cloud.provenance);
    }
}
