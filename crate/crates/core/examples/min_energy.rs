//! Minimal energy of a weight on a standard affinisation, by the closed
//! form and a brute-force box oracle.

use affinisation::affine::{AffinisationSpec, LarsKind, Weight};
use affinisation::energy::{character_of, min_energy, min_energy_slanted, EnergyOptions, Minimum};
use affinisation::rational::{q, qf};
use affinisation::rootdata::Functional;

fn show(m: &Minimum) -> String {
    m.value().map(|x| x.to_string()).unwrap_or_else(|| "-inf".into())
}

fn main() {
    let opts = EnergyOptions::default();
    let nu_prime = Functional::from_pairs(&[(1, q(1)), (3, q(-1))]);
    for kind in [LarsKind::A1, LarsKind::B1, LarsKind::C2] {
        let spec = AffinisationSpec::standard(kind, 3);
        let chi = character_of(&Functional::zero(), &nu_prime, q(0));
        for lc in [2, -2] {
            let lam = Weight::new(q(lc), Functional::from_pairs(&[(1, q(1)), (2, q(1))]), q(0));
            let rep = min_energy(&spec, &lam, &chi, opts).unwrap();
            println!(
                "{kind} rank 3, λ_c = {lc:>2}: minimum {:>6}, positive energy {}, oracle agrees {:?}",
                show(&rep.minimum),
                rep.positive_energy,
                rep.method_agreement
            );
        }
    }

    // A slanted source reduces to the unslanted orbit of the shifted pair.
    let spec = AffinisationSpec::standard(LarsKind::A1, 3);
    let nu = Functional::from_pairs(&[(1, qf(1, 3)), (2, qf(-1, 3))]);
    let lam = Weight::new(q(3), Functional::from_pairs(&[(1, q(2))]), q(0));
    let chi = character_of(&nu, &nu_prime, q(0));
    let rep = min_energy_slanted(&spec, &nu, &lam, &chi, opts).unwrap();
    println!("slanted A1 rank 3: minimum {}, witness {:?}", show(&rep.minimum), rep.witness);
}
