//! Standardization and the untwisting isomorphism on seeded operators.

use affinisation::autnorm::{root_map, standardize, verify_certificate, Family};
use affinisation::loopalg::{bracket, phi_hat};
use affinisation::rootdata::Functional;
use affinisation::sample::random_operator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn seeded_operators_standardize_and_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for f in Family::ALL {
        for i in 0..8 {
            let op = random_operator(f, &mut rng, 6, 6);
            let cert = standardize(&op).unwrap_or_else(|e| panic!("{f:?} #{i}: {e}\n{op:?}"));
            let rep = verify_certificate(&op, &cert);
            assert!(rep.passed, "{f:?} #{i}: {:?}", rep.items);
            let rm = root_map(&cert, &Functional::zero(), 4 * cert.orders.phi as i64).unwrap();
            assert!(
                rm.passed(),
                "{f:?} #{i} {}: {} {} {} {}",
                cert.lars,
                rm.weights_match,
                rm.integral_and_member,
                rm.bijective,
                rm.reflections_match
            );
        }
    }
}

#[test]
fn phi_hat_preserves_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for f in Family::ALL {
        for _ in 0..3 {
            let op = random_operator(f, &mut rng, 6, 6);
            let cert = standardize(&op).unwrap();
            let nu = Functional::from_pairs(&[(1, affinisation::rational::qf(1, 3))]);
            let src = cert.source_context(&nu).unwrap();
            let dst = cert.target_context(&nu).unwrap();
            let n = cert.orders.phi as i64;
            for _ in 0..3 {
                let a = cert.random_source_element(&op, &mut rng, &[-1, 0, 1, n], 0.4);
                let b = cert.random_source_element(&op, &mut rng, &[-2, 1, n - 1], 0.4);
                let ab = bracket(&src, &a, &b).unwrap();
                let lhs = phi_hat(&cert, &src.spec, &dst.spec, &ab).unwrap();
                let pa = phi_hat(&cert, &src.spec, &dst.spec, &a).unwrap();
                let pb = phi_hat(&cert, &src.spec, &dst.spec, &b).unwrap();
                let rhs = bracket(&dst, &pa, &pb).unwrap();
                assert_eq!(lhs, rhs, "{f:?} {}", cert.lars);
            }
        }
    }
}
