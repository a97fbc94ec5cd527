//! Built-in example systems used by the shipped scenes, the tests and the demo.

use num_complex::Complex64;

use crate::iteration::{Disk, Trap};
use crate::poly::Polynomial;
use crate::system::{GeneratorSystem, RandomModel};

/// `g_1(z) = z^2 - 1`.
pub fn basilica() -> Polynomial {
    Polynomial::from_real(&[-1.0, 0.0, 1.0]).expect("valid")
}

/// `g_2(z) = z^2 / 4`.
pub fn quarter_square() -> Polynomial {
    Polynomial::from_real(&[0.0, 0.0, 0.25]).expect("valid")
}

/// The devil's-coliseum pair `h_1 = g_1∘g_1 = z^4 - 2z^2`, `h_2 = g_2∘g_2 = z^4/64`.
pub fn dc1_system() -> GeneratorSystem {
    let g1 = basilica();
    let g2 = quarter_square();
    GeneratorSystem::new(vec![g1.compose(&g1).expect("degree 4"), g2.compose(&g2).expect("degree 4")])
        .expect("distinct generators")
}

pub fn dc1_model(p1: f64) -> RandomModel {
    RandomModel::new(dc1_system(), vec![p1, 1.0 - p1]).expect("valid weights")
}

/// `D(0, 0.4) ∪ D(-1, 0.15)`: the first disk is invariant under both maps, the second
/// surrounds the superattracting fixed point -1 of `h_1` and is sent into the first by `h_2`.
pub fn dc1_trap() -> Trap {
    Trap::new(vec![Disk::new(Complex64::new(0.0, 0.0), 0.4), Disk::new(Complex64::new(-1.0, 0.0), 0.15)])
}

/// `{z^2, z^2/4}`: two attracting fixed points, 0 and ∞.
pub fn two_attractors_system() -> GeneratorSystem {
    GeneratorSystem::new(vec![Polynomial::monomial(2), quarter_square()]).expect("distinct")
}

pub fn two_attractors_trap() -> Trap {
    Trap::new(vec![Disk::new(Complex64::new(0.0, 0.0), 0.5)])
}

/// `h_1 = z^2 - 6`, `h_2 = (z - 5)^2 - 6`: disjoint filled Julia sets, so K̂(G) is empty.
pub fn disjoint_k_system() -> GeneratorSystem {
    let shift = Polynomial::from_real(&[-5.0, 1.0]).expect("valid");
    let h1 = Polynomial::from_real(&[-6.0, 0.0, 1.0]).expect("valid");
    let h2 = h1.compose(&shift).expect("degree 2");
    GeneratorSystem::new(vec![h1, h2]).expect("distinct")
}

pub fn circle_system() -> GeneratorSystem {
    GeneratorSystem::new(vec![Polynomial::monomial(2)]).expect("valid")
}

pub fn chebyshev_system() -> GeneratorSystem {
    GeneratorSystem::new(vec![Polynomial::from_real(&[-2.0, 0.0, 1.0]).expect("valid")]).expect("valid")
}
