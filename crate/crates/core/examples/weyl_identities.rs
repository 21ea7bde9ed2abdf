//! Affine Weyl group computations: letters, word reduction, and the
//! slanted action expressed through the unslanted one.

use affinisation::affine::{AffineRoot, AffinisationSpec, ExtCartanVector, LarsKind, Weight};
use affinisation::rational::{q, qf};
use affinisation::rootdata::{CartanVector, Functional, Root};
use affinisation::weyl::{act, letter, reflect_affine, translation_lattice, unslanted_action_check, word_reduce};

fn main() {
    let spec = AffinisationSpec::standard(LarsKind::C2, 2);
    let v = ExtCartanVector::new(qf(1, 3), CartanVector::from_pairs(&[(1, q(2)), (2, qf(-1, 2))]), q(1));
    println!("spec {} rank 2, translation lattice {:?}", spec.lars, translation_lattice(&spec));

    // A letter acts exactly like its reflection.
    let r = AffineRoot::new(Root::pair(1, 1, 2, -1), 2);
    let w = letter(&spec, &r).unwrap();
    println!("letter {r}: translation {:?}, finite part {:?}", w.trans.y, w.fin);
    println!("  acts as the reflection: {}", act(&w, &v) == reflect_affine(&spec, &r, &v).unwrap());

    // r_(α,0) r_(α,n) is a pure translation.
    let a = Root::short(1, 2);
    let word = [AffineRoot::new(a.clone(), 0), AffineRoot::new(a, 2)];
    let t = word_reduce(&spec, &word).unwrap();
    println!("r(2ε1,0)·r(2ε1,2) = translation by {:?}, finite part trivial: {}", t.trans.y, t.fin.is_identity());

    // λ(ŵ ·_ν χ − χ) = λ_ν(ŵ.χ_ν − χ_ν).
    let long = [
        AffineRoot::new(Root::pair(1, 1, 2, 1), 0),
        AffineRoot::new(Root::short(2, 2), -2),
        AffineRoot::new(Root::pair(1, 1, 2, -1), 1),
    ];
    let w = word_reduce(&spec, &long).unwrap();
    let nu = Functional::from_pairs(&[(1, qf(1, 4)), (2, qf(-2, 3))]);
    let lam = Weight::new(q(3), Functional::from_pairs(&[(1, q(1))]), q(0));
    let (lhs, rhs) = unslanted_action_check(&nu, &w, &lam, &v);
    println!("slanted orbit value {lhs}, via unslanted shift {rhs}");
}
