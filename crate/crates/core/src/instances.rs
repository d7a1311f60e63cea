//! Built-in reference instances exercised by the reproduction suite and the
//! regression tests.

use num::BigRational;

use crate::linalg::HermitianMatrix;
use crate::opsys::OperatorSubsystem;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Two-by-two lattice failure: `a, b < c, d` with strictly positive gaps but
/// no common interpolant anywhere in `M_2`.
pub fn lattice_failure_m2() -> [HermitianMatrix; 4] {
    [
        HermitianMatrix::from_real(&[1.0, 0.0, 0.0, 0.0], 2).expect("constant"),
        HermitianMatrix::from_real(&[1.0, 1.0, 1.0, 1.0], 2).expect("constant"),
        HermitianMatrix::from_real(&[1.1, 0.5, 0.5, 3.6], 2).expect("constant"),
        HermitianMatrix::from_real(&[3.6, 0.5, 0.5, 1.1], 2).expect("constant"),
    ]
}

/// The three-dimensional diagonal subsystem of `C^5` whose tensor positivity
/// against `C^5 / J_{2,3}` splits between the minimal and maximal cones:
/// span of `(1,1,1,1,1)`, `(0, 1/10, 1/2, 9/10, 1)` and `(1, 0, -1/2, 0, 1)`.
pub fn separation_system() -> OperatorSubsystem {
    let e = vec![rat(1, 1); 5];
    let a = vec![rat(0, 1), rat(1, 10), rat(1, 2), rat(9, 10), rat(1, 1)];
    let b = vec![rat(1, 1), rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 1)];
    OperatorSubsystem::from_rational_diagonals(vec![e, a, b]).expect("reference basis")
}

/// Tensor coefficients `(e, a, b, b)` of the separation element over the
/// reference system, in the reduced `k + m - 1` slot order for `(k, m) = (2, 3)`.
pub fn separation_coefficients() -> Vec<HermitianMatrix> {
    let sys = separation_system();
    let e = sys.basis()[0].clone();
    let a = sys.basis()[1].clone();
    let b = sys.basis()[2].clone();
    vec![e, a, b.clone(), b]
}

/// The same data shaped as an interpolation instance: lower bounds
/// `{-b, -b, 0}`, upper bounds `{e, a}`.
pub fn separation_interpolation_bounds() -> (Vec<HermitianMatrix>, Vec<HermitianMatrix>) {
    let sys = separation_system();
    let e = sys.basis()[0].clone();
    let a = sys.basis()[1].clone();
    let b = sys.basis()[2].clone();
    let lower = vec![b.scale(-1.0), b.scale(-1.0), HermitianMatrix::zeros(5)];
    let upper = vec![e, a];
    (lower, upper)
}

/// The diagonal witness `(0, 1/10, 1/2, 1/10, 0)` separating the two cones
/// from the ambient side.
pub fn separation_ambient_witness() -> HermitianMatrix {
    HermitianMatrix::from_diag(&[0.0, 0.1, 0.5, 0.1, 0.0])
}
