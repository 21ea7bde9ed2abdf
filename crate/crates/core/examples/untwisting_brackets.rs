//! The untwisting isomorphism `φ̂` preserves brackets on seeded operators
//! of every family.

use affinisation::autnorm::{standardize, Family};
use affinisation::loopalg::{bracket, phi_hat};
use affinisation::rational::qf;
use affinisation::rootdata::Functional;
use affinisation::sample::random_operator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let nu = Functional::from_pairs(&[(1, qf(1, 2))]);
    for family in Family::ALL {
        let op = random_operator(family, &mut rng, 6, 4);
        let cert = standardize(&op).expect("standardizes");
        let src = cert.source_context(&nu).expect("source loop algebra");
        let dst = cert.target_context(&nu).expect("target loop algebra");
        let n = cert.orders.phi as i64;
        let mut agree = 0;
        let trials = 4;
        for _ in 0..trials {
            let a = cert.random_source_element(&op, &mut rng, &[-1, 0, 1, n], 0.4);
            let b = cert.random_source_element(&op, &mut rng, &[-n, 1, 2], 0.4);
            let lhs = phi_hat(&cert, &src.spec, &dst.spec, &bracket(&src, &a, &b).unwrap()).unwrap();
            let pa = phi_hat(&cert, &src.spec, &dst.spec, &a).unwrap();
            let pb = phi_hat(&cert, &src.spec, &dst.spec, &b).unwrap();
            agree += (lhs == bracket(&dst, &pa, &pb).unwrap()) as usize;
        }
        println!(
            "{family:?}: dim {}, order {}, target {} -> brackets preserved {agree}/{trials}",
            op.matrix.rows(),
            cert.orders.phi,
            cert.lars
        );
    }
}
