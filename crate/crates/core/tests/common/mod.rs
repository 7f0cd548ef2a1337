//! Exact evaluation of cone generating functions at rational points.

use num_rational::BigRational;
use num_traits::{One, Pow};

use flagtutte::HalfOpenSimplicialCone;

pub fn t_power(t: &[BigRational], w: &[i64]) -> BigRational {
    t.iter().zip(w).fold(BigRational::one(), |acc, (x, &e)| acc * Pow::pow(x, e as i32))
}

/// `sign * t^apex * prod (open ? t^v : 1) / (1 - t^v)` at the point `t`.
pub fn cell_value(c: &HalfOpenSimplicialCone, t: &[BigRational]) -> BigRational {
    let mut value = t_power(t, &c.apex.0) * BigRational::from_integer(i64::from(c.sign).into());
    for (ray, &open) in c.rays.iter().zip(&c.open) {
        let tr = t_power(t, &ray.0);
        let num = if open { tr.clone() } else { BigRational::one() };
        value = value * num / (BigRational::one() - tr);
    }
    value
}
