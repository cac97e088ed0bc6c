use serde::{Deserialize, Serialize};

use crate::activity::{ActivityCategory, Composition};
use crate::error::{Error, Result};

const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;

/// Cartesian position in the unit-edge triangle with vertices
/// `(0, 0)`, `(1, 0)` and `(1/2, √3/2)` for the first, second and third share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TernaryPoint {
    pub x: f64,
    pub y: f64,
    /// The three selected shares renormalized to sum to 1.
    pub shares: [f64; 3],
}

/// Projects each composition onto the triple `(a, b, c)`.
pub fn ternary_coordinates(compositions: &[Composition], triple: [ActivityCategory; 3]) -> Result<Vec<TernaryPoint>> {
    compositions
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let raw = triple.map(|c| comp[c.index()]);
            let sum: f64 = raw.iter().sum();
            if !(sum > 0.0) {
                return Err(Error::AllZeroTriple(i));
            }
            let [a, b, c] = raw.map(|v| v / sum);
            Ok(TernaryPoint { x: 0.5 * (2.0 * b + c), y: HALF_SQRT3 * c, shares: [a, b, c] })
        })
        .collect()
}

/// Barycentric shares of a Cartesian point.
pub fn ternary_inverse(x: f64, y: f64) -> [f64; 3] {
    let c = y / HALF_SQRT3;
    let b = x - 0.5 * c;
    [1.0 - b - c, b, c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::ActivityCategory::*;

    fn comp(a: f64, b: f64, c: f64) -> Composition {
        let mut v = [0.0; 8];
        v[4] = a;
        v[1] = b;
        v[6] = c;
        v
    }

    const T: [ActivityCategory; 3] = [C05, C02, C07];

    #[test]
    fn vertices_and_centroid() {
        let p = ternary_coordinates(&[comp(1.0, 0.0, 0.0), comp(1.0, 1.0, 1.0)], T).unwrap();
        assert_eq!((p[0].x, p[0].y), (0.0, 0.0));
        assert!((p[1].x - 0.5).abs() < 1e-15);
        assert!((p[1].y - 3f64.sqrt() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn all_zero_triple() {
        assert!(matches!(
            ternary_coordinates(&[comp(0.2, 0.3, 0.5), comp(0.0, 0.0, 0.0)], T),
            Err(Error::AllZeroTriple(1))
        ));
    }
}
