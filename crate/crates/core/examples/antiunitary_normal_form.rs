//! Block normal form of seeded antiunitary operators.

use affinisation::autnorm::{antiunitary_normal_form, finite_order_lift};
use affinisation::sample::antiunitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (dim, half_order) in [(4, 2), (5, 3), (6, 4)] {
        let op = antiunitary(&mut rng, dim, half_order);
        let lifted = finite_order_lift(&op).expect("finite order").operator;
        let form = antiunitary_normal_form(&lifted).expect("normal form exists");
        println!("dim {dim}, order {}:", form.order);
        for b in &form.blocks {
            println!("  block n = {:>2}  (e+ at column {}, e- at column {})", b.n, b.plus, b.minus);
        }
        if let Some(f) = form.fixed_vector {
            println!("  fixed vector at column {f}");
        }
        println!(
            "  reassembles the operator: {}",
            form.reconstruct() == lifted.matrix.lift(form.basis_change.conductor())
        );
    }
}
