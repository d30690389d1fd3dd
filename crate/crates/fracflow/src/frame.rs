//! Directions and orthonormal frames.
//!
//! A `Frame` is an ordered orthonormal basis of R^d; every directional
//! operator in this crate is defined relative to one. Frames are built from
//! Givens angles (one angle in d = 2, the d(d-1)/2 plane angles in general)
//! or from explicit rows.

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-10;

/// A unit vector in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    components: Vec<f64>,
}

impl Direction {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("direction needs dimension >= 1".into()));
        }
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!(
                "direction norm {norm} is not 1 within {UNIT_TOL:e}"
            )));
        }
        Ok(Self { components })
    }

    /// Normalizes a nonzero vector.
    pub fn from_vector(v: &[f64]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize zero or non-finite vector".into()));
        }
        Direction::new(v.iter().map(|c| c / norm).collect())
    }

    pub fn axis(dim: usize, axis: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[axis] = 1.0;
        Self { components: c }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.components.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Ordered orthonormal basis of R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    directions: Vec<Direction>,
}

impl Frame {
    /// The canonical basis e_1..e_d.
    pub fn canonical(dim: usize) -> Self {
        Self {
            directions: (0..dim).map(|a| Direction::axis(dim, a)).collect(),
        }
    }

    /// Validates orthonormality and |det| = 1.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: row.len() });
            }
        }
        for i in 0..d {
            for j in i..d {
                let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > ORTHO_TOL {
                    return Err(Error::Domain(format!(
                        "rows {i},{j} have dot {dot}, expected {target}"
                    )));
                }
            }
        }
        let det = determinant(&rows);
        if (det.abs() - 1.0).abs() > DET_TOL {
            return Err(Error::Domain(format!("frame determinant {det} is not +-1")));
        }
        Ok(Self {
            directions: rows
                .into_iter()
                .map(|r| Direction { components: r })
                .collect(),
        })
    }

    /// Frame from Givens angles with plane order (1,2),(1,3),...,(d-1,d).
    ///
    /// d = 2 takes a single angle; an all-zero list gives the canonical
    /// basis. The rows are the rows of the product rotation matrix.
    pub fn from_angles(dim: usize, angles: &[f64]) -> Result<Self> {
        let expected = dim * (dim - 1) / 2;
        if angles.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: angles.len() });
        }
        let mut rot = identity(dim);
        let mut idx = 0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (s, c) = angles[idx].sin_cos();
                idx += 1;
                // rot <- rot * G_{ij}(angle)
                for row in rot.iter_mut() {
                    let a = row[i];
                    let b = row[j];
                    row[i] = a * c - b * s;
                    row[j] = a * s + b * c;
                }
            }
        }
        Frame::from_rows(rot)
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn direction(&self, l: usize) -> &Direction {
        &self.directions[l]
    }

    /// Coordinates of `x` on the frame: (theta_1 . x, ..., theta_d . x).
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.directions.iter().map(|t| t.dot(x)).collect())
    }

    /// Gram matrix; identity for a valid frame.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.directions[i].dot(self.directions[j].components()))
                    .collect()
            })
            .collect()
    }
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn determinant(m: &[Vec<f64>]) -> f64 {
    // Gaussian elimination with partial pivoting; d is tiny here.
    let d = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..d {
            let f = a[row][col] / a[col][col];
            for k in col..d {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_angle_is_canonical() {
        let f = Frame::from_angles(2, &[0.0]).unwrap();
        assert_eq!(f.direction(0).components(), &[1.0, 0.0]);
        assert_eq!(f.direction(1).components(), &[0.0, 1.0]);
        let f3 = Frame::from_angles(3, &[0.0; 3]).unwrap();
        assert_eq!(f3, Frame::canonical(3));
    }

    #[test]
    fn quarter_turn_rows() {
        let f = Frame::from_angles(2, &[std::f64::consts::FRAC_PI_2]).unwrap();
        let r0 = f.direction(0).components();
        let r1 = f.direction(1).components();
        assert_abs_diff_eq!(r0[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r0[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r1[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r1[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn wrong_angle_count_rejected() {
        assert!(matches!(
            Frame::from_angles(3, &[0.1, 0.2]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn random_angles_gram_is_identity() {
        // oracle: direct Gram matrix of the constructed rows
        let f = Frame::from_angles(3, &[0.37, -1.21, 2.53]).unwrap();
        let g = f.gram();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g[i][j], target, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn completeness_sum_theta_theta_t() {
        let f = Frame::from_angles(2, &[0.9]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: f64 = (0..2)
                    .map(|l| f.direction(l).components()[i] * f.direction(l).components()[j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(s, target, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let f = Frame::canonical(2);
        assert_eq!(f.project(&[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);

        let r = Frame::from_angles(2, &[std::f64::consts::FRAC_PI_2]).unwrap();
        let p = r.project(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(p[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn projection_preserves_norm() {
        let f = Frame::from_angles(3, &[0.4, 1.3, -0.8]).unwrap();
        let x = [0.3, -2.7, 1.9];
        let p = f.project(&x).unwrap();
        let n1: f64 = x.iter().map(|v| v * v).sum();
        let n2: f64 = p.iter().map(|v| v * v).sum();
        assert_abs_diff_eq!(n1, n2, epsilon = 1e-12);
    }

    #[test]
    fn bad_direction_rejected() {
        assert!(Direction::new(vec![0.5, 0.5]).is_err());
        assert!(Direction::new(vec![]).is_err());
        assert!(Direction::from_vector(&[3.0, 4.0]).is_ok());
    }
}
