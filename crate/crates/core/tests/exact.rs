//! The Scalar-only stages run unchanged in exact rational arithmetic.

use dualbvp::band::solve;
use dualbvp::{
    assemble_matrix, assemble_rhs, bernstein_gram, binomial, dual_coefficients, rational, BVProblem, BernsteinPoly,
    BigRational, ExactBernsteinPoly, MomentVector,
};
use num_traits::{One, Zero};

type Q = BigRational;

/// `y = x^4 - 2x^3 + x` with `y'' = 12x^2 - 12x`, assembled and solved exactly.
#[test]
fn quartic_is_reproduced_exactly() {
    let (m, k, l) = (2, 1, 1);
    for n in 4..=12 {
        let d = n - m;
        // y'' in Bernstein form of degree d, then its exact moments
        let ypp: Vec<Q> = (0..=d)
            .map(|i| {
                rational(12, 1) * binomial::<Q>(i, 2) / binomial::<Q>(d, 2)
                    - rational(12, 1) * binomial::<Q>(i, 1) / binomial::<Q>(d, 1)
            })
            .collect();
        let gram = bernstein_gram::<Q>(d);
        let moments: Vec<Q> = gram
            .iter()
            .map(|row| row.iter().zip(&ypp).map(|(g, c)| g * c).sum())
            .collect();
        let moments = MomentVector::from_values(n, m, moments).unwrap();
        let duals = dual_coefficients::<Q>(d);
        let v = assemble_rhs(n, m, k, l, &duals, &moments, &[Q::zero()], &[Q::zero()]).unwrap();
        let system = assemble_matrix::<Q>(n, m, k, l).unwrap().with_rhs(v).unwrap();
        let inner = solve(&system).unwrap();

        let want: Vec<Q> = (0..=n)
            .map(|i| {
                binomial::<Q>(i, 4) / binomial::<Q>(n, 4) - rational(2, 1) * binomial::<Q>(i, 3) / binomial::<Q>(n, 3)
                    + rational(i as i64, n as i64)
            })
            .collect();
        assert_eq!(inner, want[1..n].to_vec(), "degree {n}");
    }
}

#[test]
fn exact_polynomials_and_problems() {
    let p: ExactBernsteinPoly = BernsteinPoly::new(vec![rational(1, 3), rational(-1, 2), Q::one()]).unwrap();
    assert_eq!(p.eval(rational(1, 2)).unwrap(), rational(1, 12));
    assert_eq!(p.derivative(2).unwrap().coeffs(), &[rational(14, 3)]);

    let problem = BVProblem::new(vec![rational(2, 1)], vec![rational(5, 1)], |_x: Q, _d: &[Q]| Q::zero()).unwrap();
    let seed = dualbvp::seed(&problem);
    assert_eq!(seed.coeffs(), &[rational(2, 1), rational(5, 1)]);
    let (left, right) = dualbvp::outer_coefficients(&problem, 6).unwrap();
    assert_eq!((left, right), (vec![rational(2, 1)], vec![rational(5, 1)]));
}
