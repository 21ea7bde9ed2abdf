//! Bracket identities of the double extension on random elements of each
//! standard loop algebra.

use affinisation::affine::{AffinisationSpec, LarsKind};
use affinisation::loopalg::{identity_checks, LoopContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let modes = [-2, -1, 0, 1, 2];
    for kind in LarsKind::ALL {
        let ctx = LoopContext::standard(AffinisationSpec::standard(kind, 2), 4).expect("standard model");
        let trials = 10;
        let mut ok = 0;
        for _ in 0..trials {
            let a = ctx.random_element(&mut rng, &modes, 0.3);
            let b = ctx.random_element(&mut rng, &modes, 0.3);
            let c = ctx.random_element(&mut rng, &modes, 0.3);
            ok += identity_checks(&ctx, &a, &b, &c).unwrap().all() as usize;
        }
        println!("{kind}: matrix dim {}, identities hold on {ok}/{trials} triples", ctx.dim());
    }
}
