//! Standardize a finite-order unitary operator and verify its certificate.
//!
//! `A = diag(1, ζ₃, ζ₃²)` on `C³` induces an automorphism of `u₃(C)` of
//! order 3; its standard form is the identity twist with a slant `μ`.

use affinisation::autnorm::{standardize, verify_certificate, Field, OperatorSpec};
use affinisation::cyclo::CycScalar;
use affinisation::matrix::CMat;

fn main() {
    let l = 12;
    let d: Vec<CycScalar> = (0..3).map(|k| CycScalar::root_of_unity(l, k, 3)).collect();
    let op = OperatorSpec::new(Field::C, false, 3, CMat::diag(l, &d)).expect("well-formed operator");

    let cert = standardize(&op).expect("standardizes");
    println!("family      {:?}", cert.family);
    println!("lars kind   {}", cert.lars);
    println!("rank        {}", cert.rank);
    println!("exponents   {:?}", cert.exponents);
    println!("mu          {:?}", cert.mu);
    println!("orders      phi = {}, psi = {}", cert.orders.phi, cert.orders.psi);

    let report = verify_certificate(&op, &cert);
    for item in &report.items {
        println!("  [{}] {}", if item.passed { "ok" } else { "FAIL" }, item.name);
    }
    println!("verified: {}", report.passed);
}
