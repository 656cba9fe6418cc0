#![allow(dead_code)]

use gerbelab::algebra_core::frac;
use gerbelab::cech::{AbelianCoefficients, Cochain, Nerve};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Every nerve shipped with the fixtures, by name.
pub fn fixture_nerves() -> Vec<(&'static str, Nerve)> {
    vec![
        ("tetrahedron boundary", Nerve::tetrahedron_boundary()),
        ("3-simplex", Nerve::full_simplex(4)),
        ("4-simplex", Nerve::full_simplex(5)),
        ("projective plane", Nerve::projective_plane()),
        ("torus", Nerve::torus()),
        ("4-simplex boundary", Nerve::simplex_boundary(5)),
        ("triangle", Nerve::full_simplex(3)),
    ]
}

pub fn random_coefficients(rng: &mut StdRng) -> AbelianCoefficients {
    match rng.random_range(0..4) {
        0 => AbelianCoefficients::Integers,
        1 => AbelianCoefficients::Rationals,
        2 => AbelianCoefficients::modular(rng.random_range(2..8)).unwrap(),
        _ => AbelianCoefficients::RationalsModOne,
    }
}

pub fn random_value(rng: &mut StdRng, k: &AbelianCoefficients) -> BigRational {
    match k {
        AbelianCoefficients::Integers | AbelianCoefficients::IntegersMod(_) => frac(rng.random_range(-9..10), 1),
        _ => frac(rng.random_range(-9..10), rng.random_range(1..7)),
    }
}

pub fn random_cochain(rng: &mut StdRng, nerve: &Nerve, degree: usize, k: &AbelianCoefficients) -> Cochain {
    let values = (0..nerve.count(degree)).map(|_| random_value(rng, k)).collect();
    Cochain::new(nerve, degree, k.clone(), values).unwrap()
}
