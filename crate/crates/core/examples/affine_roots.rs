//! Affine roots of the seven standard affinisations in a small mode window.

use affinisation::affine::{
    admissible_mode_step, affine_coroot, eval_root, lars_contains, AffineRoot, AffinisationSpec, LarsKind,
};
use affinisation::rational::q;

fn main() {
    let window = 2;
    for kind in LarsKind::ALL {
        let spec = AffinisationSpec::standard(kind, 2);
        let mut roots = Vec::new();
        for a in spec.finite_roots() {
            for n in -window..=window {
                let r = AffineRoot::new(a.clone(), n);
                if lars_contains(kind, &r, &spec.base).unwrap() {
                    roots.push(r);
                }
            }
        }
        let coroots_ok = roots.iter().all(|r| eval_root(&spec, r, &affine_coroot(&spec, r).unwrap()).unwrap() == q(2));
        let steps: Vec<String> = spec
            .finite_roots()
            .iter()
            .filter(|a| a.coeffs().values().next().is_some_and(|&c| c > 0))
            .map(|a| {
                let (r, s) = admissible_mode_step(kind, a).unwrap();
                format!("{a}: n ≡ {r} mod {s}")
            })
            .collect();
        println!(
            "{kind} (N = {}): {} roots with |n| ≤ {window}, coroot pairing 2: {coroots_ok}",
            spec.twist_order,
            roots.len()
        );
        println!("    {}", steps.join(", "));
    }
}
