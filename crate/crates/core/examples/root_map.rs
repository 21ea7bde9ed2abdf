//! The root relabelling `(α, n) ↦ (α, n')` induced by a standardization.
//!
//! `A = diag(1, −1)` gives a twist of order 2 on `u₂(C)`; modes of the
//! root `ε₁ − ε₂` are odd on the twisted side and arbitrary after untwisting.

use affinisation::autnorm::{mode_class, root_map, standardize, Field, OperatorSpec};
use affinisation::cyclo::CycScalar;
use affinisation::matrix::CMat;
use affinisation::rootdata::{Functional, Root};

fn main() {
    let l = 8;
    let a = CMat::diag(l, &[CycScalar::one(l), CycScalar::from_i64(l, -1)]);
    let op = OperatorSpec::new(Field::C, false, 2, a).expect("well-formed operator");
    let cert = standardize(&op).expect("standardizes");
    println!("target {} at rank {}, mu = {:?}", cert.lars, cert.rank, cert.mu);

    let alpha = Root::pair(1, 1, 2, -1);
    let class = mode_class(&cert, &alpha).expect("root of the model");
    println!("modes of {alpha} on the twisted side: {class:?}");

    let report = root_map(&cert, &Functional::zero(), 4).expect("root map");
    for row in &report.rows {
        let image = row.image.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        println!("  {:<16} -> {:<16} in target: {}", row.root.to_string(), image, row.in_target);
    }
    println!(
        "weights match {}, integral {}, bijective {}, reflections {}",
        report.weights_match, report.integral_and_member, report.bijective, report.reflections_match
    );
}
