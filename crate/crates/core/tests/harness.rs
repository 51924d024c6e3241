use rand::Rng;
use rand_distr::StandardNormal;
use symcone::cone::ConePoint;
use symcone::harness::{factorization_check, parameter_recovery, FactorizationConfig};
use symcone::rng::stream_rng;
use symcone::wishart::{sample, WishartParams};
use symcone::{AlgebraDescriptor, Element};

#[test]
fn factorization_constant_for_every_matrix_kind() {
    for r in [3, 4] {
        for d in [
            AlgebraDescriptor::real_sym(r).unwrap(),
            AlgebraDescriptor::complex_herm(r).unwrap(),
            AlgebraDescriptor::quat_herm(r).unwrap(),
        ] {
            let p = d.dim_over_rank() + 0.7;
            let cfg = FactorizationConfig {
                descriptor: d,
                p1: p,
                p2: p + 1.3,
                scale: ConePoint::new(Element::from_real_diagonal(d, &vec![0.5; r]).unwrap())
                    .unwrap(),
                n: 2000,
                seed: r as u64,
                exponent_shift: 0.0,
            };
            let res = factorization_check(&cfg).unwrap().residual;
            assert!(res.spread() < 1e-9, "{d}: {res:?}");
        }
    }
}

#[test]
fn recovers_generating_parameters() {
    let d = AlgebraDescriptor::real_sym(3).unwrap();
    let batch = sample(&WishartParams::standard(3.0, d).unwrap(), 10_000, 21).unwrap();
    let rep = parameter_recovery(&batch.samples, 22).unwrap();
    assert!((rep.shape - 3.0).abs() < 0.1, "{}", rep.shape);
    assert!(rep.scale.distance(&Element::identity(d)) < 0.1);
    assert!(!rep.goodness_of_fit.unwrap().flagged);
}

#[test]
fn misspecified_data_is_flagged() {
    let d = AlgebraDescriptor::real_sym(3).unwrap();
    let mut rng = stream_rng(23, 0);
    // symmetric matrices with absolute Gaussian entries, shifted onto the cone
    let xs: Vec<Element> = (0..2000)
        .map(|_| {
            let mut m = [0.0; 9];
            for i in 0..3 {
                for j in i..3 {
                    let v: f64 = rng.sample::<f64, _>(StandardNormal).abs();
                    m[i * 3 + j] = v;
                    m[j * 3 + i] = v;
                }
            }
            Element::from_real_matrix(d, &m).unwrap().shift(3.0)
        })
        .collect();
    let rep = parameter_recovery(&xs, 24).unwrap();
    assert!(rep.goodness_of_fit.unwrap().flagged);
}
