//! Pentagon and hexagon equations for candidate associators in `U(t̂_3)`,
//! with `R = exp(t_12 / 2)`.

use num_traits::{One, Zero};

use super::env::EnvSeries;
use super::tn::SeriesError;
use crate::linalg::{ratio, Rational};

fn half_exp(n: usize, trunc: usize, pairs: &[(usize, usize)]) -> Result<EnvSeries, SeriesError> {
    let mut x = EnvSeries::zero(n, trunc);
    for &(a, b) in pairs {
        x = x.add(&EnvSeries::generator(n, trunc, a, b))?;
    }
    x.scaled(&ratio(1, 2)).exp()
}

fn require_three(phi: &EnvSeries) -> Result<(), SeriesError> {
    if phi.n() != 3 {
        return Err(SeriesError::Arity {
            expected: 3,
            found: phi.n(),
        });
    }
    Ok(())
}

fn product(factors: &[EnvSeries]) -> Result<EnvSeries, SeriesError> {
    let mut it = factors.iter();
    let mut acc = it.next().expect("nonempty product").clone();
    for f in it {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// `lhs - rhs` of both hexagons:
/// `e^{(t13+t23)/2} = Φ^{312} e^{t13/2} (Φ^{132})^{-1} e^{t23/2} Φ` and
/// `e^{(t12+t13)/2} = (Φ^{231})^{-1} e^{t13/2} Φ^{213} e^{t12/2} Φ^{-1}`.
pub fn hexagon_residuals(phi: &EnvSeries) -> Result<[EnvSeries; 2], SeriesError> {
    require_three(phi)?;
    let trunc = phi.trunc();
    let e = |p: &[(usize, usize)]| half_exp(3, trunc, p);
    let first = e(&[(0, 2), (1, 2)])?.sub(&product(&[
        phi.permuted(&[2, 0, 1]),
        e(&[(0, 2)])?,
        phi.permuted(&[0, 2, 1]).inverse()?,
        e(&[(1, 2)])?,
        phi.clone(),
    ])?)?;
    let second = e(&[(0, 1), (0, 2)])?.sub(&product(&[
        phi.permuted(&[1, 2, 0]).inverse()?,
        e(&[(0, 2)])?,
        phi.permuted(&[1, 0, 2]),
        e(&[(0, 1)])?,
        phi.inverse()?,
    ])?)?;
    Ok([first, second])
}

/// `Φ^{1,2,34} Φ^{12,3,4} - Φ^{2,3,4} Φ^{1,23,4} Φ^{1,2,3}` in `U(t̂_4)`.
pub fn pentagon_residual(phi: &EnvSeries) -> Result<EnvSeries, SeriesError> {
    require_three(phi)?;
    let c = |blocks: &[Vec<usize>]| phi.cabled(4, blocks);
    let lhs = c(&[vec![0], vec![1], vec![2, 3]]).mul(&c(&[vec![0, 1], vec![2], vec![3]]))?;
    let rhs = product(&[
        c(&[vec![1], vec![2], vec![3]]),
        c(&[vec![0], vec![1, 2], vec![3]]),
        c(&[vec![0], vec![1], vec![2]]),
    ])?;
    lhs.sub(&rhs)
}

/// Largest residual coefficient per weight for the pentagon and both hexagons.
#[derive(Clone, Debug, PartialEq)]
pub struct AssociatorResiduals {
    pub pentagon: Vec<f64>,
    pub hexagons: [Vec<f64>; 2],
}

impl AssociatorResiduals {
    pub fn evaluate(phi: &EnvSeries) -> Result<Self, SeriesError> {
        let [h1, h2] = hexagon_residuals(phi)?;
        Ok(Self {
            pentagon: pentagon_residual(phi)?.max_abs_by_weight(),
            hexagons: [h1.max_abs_by_weight(), h2.max_abs_by_weight()],
        })
    }

    pub fn max_hexagon(&self, w: usize) -> f64 {
        self.hexagons[0][w].max(self.hexagons[1][w])
    }
}

/// `1 + c [t_13, t_23]` truncated at `trunc`.
pub fn weight_two_candidate(c: &Rational, trunc: usize) -> EnvSeries {
    let x = EnvSeries::generator(3, trunc, 0, 2)
        .commutator(&EnvSeries::generator(3, trunc, 1, 2))
        .expect("same shape");
    EnvSeries::one(3, trunc).add(&x.scaled(c)).expect("same shape")
}

/// The coefficients `c` for which `1 + c [t_13, t_23]` solves both hexagons
/// in weight two, or `None` if there is no unique such value.
pub fn solve_weight_two_hexagons() -> Option<Rational> {
    let r0 = hexagon_residuals(&weight_two_candidate(&Rational::zero(), 2)).ok()?;
    let r1 = hexagon_residuals(&weight_two_candidate(&Rational::one(), 2)).ok()?;
    let mut solution: Option<Rational> = None;
    for (a, b) in r0.iter().zip(&r1) {
        let slope = b.sub(a).ok()?;
        let (base, slope) = (a.coords(2), slope.coords(2));
        for (x, y) in base.iter().zip(&slope) {
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let c = -x / y;
            match &solution {
                Some(s) if *s != c => return None,
                _ => solution = Some(c),
            }
        }
    }
    solution
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_associator() {
        let one = EnvSeries::one(3, 3);
        assert!(pentagon_residual(&one).unwrap().is_zero());
        let r = AssociatorResiduals::evaluate(&one).unwrap();
        assert_eq!(r.hexagons[0][1], 0.0);
        assert_eq!(r.max_hexagon(2), 0.125);
    }

    #[test]
    fn weight_two_coefficient_is_minus_one_over_twenty_four() {
        let c = solve_weight_two_hexagons().expect("unique solution");
        assert_eq!(c, ratio(-1, 24));
        let r = AssociatorResiduals::evaluate(&weight_two_candidate(&c, 2)).unwrap();
        assert_eq!(r.max_hexagon(2), 0.0);
        // the inverse orientation does not solve them
        let inv = weight_two_candidate(&-c, 2);
        assert!(AssociatorResiduals::evaluate(&inv).unwrap().max_hexagon(2) > 0.0);
    }

    #[test]
    fn pentagon_holds_in_weight_two_for_any_commutator_coefficient() {
        let phi = weight_two_candidate(&ratio(7, 3), 2);
        assert!(pentagon_residual(&phi).unwrap().is_zero());
    }

    #[test]
    fn arity_is_checked() {
        assert!(hexagon_residuals(&EnvSeries::one(4, 2)).is_err());
    }
}
