//! Property tests on random modules drawn from seeded generators.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use a1_core::a1core::margolis::margolis;
use a1_core::a1core::module::A1Module;
use a1_core::a1core::reduce::reduce;
use a1_core::a1core::text::{build_module, write_module};
use a1_core::families::{random_module, z_module};
use a1_core::stable::{dual, omega, tensor};

fn module(seed: u64, max_dim: usize) -> A1Module {
    random_module(&mut ChaCha8Rng::seed_from_u64(seed), max_dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_format_round_trip(seed in any::<u64>()) {
        let m = module(seed, 40);
        let back = build_module(&write_module(&m)).unwrap();
        prop_assert!(back.same_structure(&m));
    }

    #[test]
    fn omega_shifts_margolis(seed in any::<u64>()) {
        let m = module(seed, 30);
        let om = omega(&m, 1).unwrap();
        prop_assert_eq!(margolis(&om), margolis(&m).shifted(1, 3));
        let back = omega(&om, -1).unwrap();
        prop_assert_eq!(margolis(&back), margolis(&m));
    }

    #[test]
    fn reduce_accounting(seed in any::<u64>()) {
        let m = module(seed, 40);
        let r = reduce(&m).unwrap();
        prop_assert_eq!(m.total_dim(), 8 * r.free_rank + r.reduced.total_dim());
        prop_assert!(r.reduced.is_reduced());
        prop_assert_eq!(margolis(&r.reduced), margolis(&m));
    }

    #[test]
    fn kunneth_and_duality(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (module(a, 16), module(b, 16));
        let t = tensor(&x, &y).unwrap();
        prop_assert_eq!(margolis(&t), margolis(&x).convolve(&margolis(&y)));
        prop_assert!(dual(&dual(&x)).same_structure(&x));
    }
}

#[test]
fn suspension_commutes_with_margolis() {
    let z = z_module();
    assert_eq!(margolis(&z.suspend(5)), margolis(&z).shifted(5, 5));
}
