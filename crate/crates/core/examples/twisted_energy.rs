//! Minimal energy for a twisted affinisation given only by its operator.
//!
//! `A = diag(1, −1)` on `C²`: the target slant `μ = (0, −1/2)` makes weights
//! with odd `λ_c` non-integral, so the example uses `λ_c = ±2`.

use affinisation::affine::Weight;
use affinisation::autnorm::{Field, OperatorSpec};
use affinisation::cyclo::CycScalar;
use affinisation::energy::{twisted_min_energy, EnergyOptions};
use affinisation::matrix::CMat;
use affinisation::rational::q;
use affinisation::rootdata::Functional;

fn main() {
    let l = 8;
    let a = CMat::diag(l, &[CycScalar::one(l), CycScalar::from_i64(l, -1)]);
    let op = OperatorSpec::new(Field::C, false, 2, a).expect("well-formed operator");
    let nu = Functional::zero();
    let nu_prime = Functional::from_pairs(&[(1, q(1))]);
    for lc in [1, 2, -2] {
        let lam = Weight::new(q(lc), Functional::from_pairs(&[(1, q(1))]), q(0));
        match twisted_min_energy(&op, &lam, &nu, &nu_prime, EnergyOptions::default()) {
            Ok(rep) => println!(
                "λ_c = {lc:>2}: minimum {}, positive energy {}, oracle agrees {:?}",
                rep.minimum.value().map(|x| x.to_string()).unwrap_or_else(|| "-inf".into()),
                rep.positive_energy,
                rep.method_agreement
            ),
            Err(e) => println!("λ_c = {lc:>2}: {e}"),
        }
    }
}
