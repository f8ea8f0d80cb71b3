//! Small dense linear algebra: numeric rank and exact symbolic inverses.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::NormalForm;

pub const RANK_PIVOT_THRESHOLD: f64 = 1e-10;

/// Rank by Gaussian elimination with partial pivoting; pivots with absolute
/// value at most `RANK_PIVOT_THRESHOLD` count as zero.
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (pivot_row, pivot) = (rank..rows)
            .map(|r| (r, a[(r, c)].abs()))
            .fold((rank, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if pivot <= RANK_PIVOT_THRESHOLD {
            continue;
        }
        a.swap_rows(rank, pivot_row);
        for r in rank + 1..rows {
            let factor = a[(r, c)] / a[(rank, c)];
            if factor != 0.0 {
                for k in c..cols {
                    a[(r, k)] -= factor * a[(rank, k)];
                }
            }
        }
        rank += 1;
    }
    rank
}

pub type SymMatrix = Vec<Vec<NormalForm>>;

fn minor(m: &SymMatrix, row: usize, col: usize) -> SymMatrix {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, line)| {
            line.iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first row.
pub fn determinant(m: &SymMatrix) -> Result<NormalForm> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    match n {
        0 => Ok(NormalForm::one()),
        1 => Ok(m[0][0].clone()),
        2 => m[0][0].mul(&m[1][1])?.sub(&m[0][1].mul(&m[1][0])?),
        _ => {
            let mut acc = NormalForm::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let term = m[0][c].mul(&determinant(&minor(m, 0, c))?)?;
                acc = if c % 2 == 0 {
                    acc.add(&term)?
                } else {
                    acc.sub(&term)?
                };
            }
            Ok(acc)
        }
    }
}

/// Exact inverse through the adjugate; a structurally zero determinant is
/// reported as `SingularJacobian`.
pub fn inverse(m: &SymMatrix) -> Result<SymMatrix> {
    let n = m.len();
    let det = determinant(m)?;
    if det.is_zero() {
        return Err(Error::SingularJacobian);
    }
    let inv_det = det.recip()?;
    let mut out = vec![vec![NormalForm::zero(); n]; n];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let cof = if n == 1 {
                NormalForm::one()
            } else {
                determinant(&minor(m, c, r))?
            };
            let cof = if (r + c) % 2 == 0 { cof } else { cof.neg()? };
            *entry = cof.mul(&inv_det)?;
        }
    }
    Ok(out)
}

pub fn mat_mul(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            if row.len() != inner {
                return Err(Error::Invalid("matrix shape mismatch".into()));
            }
            (0..cols)
                .map(|c| {
                    let mut acc = NormalForm::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][c].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][c])?)?;
                        }
                    }
                    Ok(acc)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Chart};

    #[test]
    fn rank_of_skew_matrices() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(numeric_rank(&m), 2);
        assert_eq!(numeric_rank(&DMatrix::zeros(3, 3)), 0);
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 3.0, -2.0, -3.0, 0.0, 1.0, 2.0, -1.0, 0.0]);
        assert_eq!(numeric_rank(&m), 2);
        let tiny = DMatrix::from_row_slice(2, 2, &[0.0, 1e-11, -1e-11, 0.0]);
        assert_eq!(numeric_rank(&tiny), 0);
    }

    #[test]
    fn symbolic_inverse() {
        let chart = Chart::new("m", &["a", "b"]).unwrap();
        let nf = |s: &str| NormalForm::from_expr(&parse(s, &chart).unwrap()).unwrap();
        let frame = vec![vec![nf("a"), nf("0")], vec![nf("b"), nf("1")]];
        let inv = inverse(&frame).unwrap();
        let id = mat_mul(&frame, &inv).unwrap();
        for (r, row) in id.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let expected = if r == c {
                    NormalForm::one()
                } else {
                    NormalForm::zero()
                };
                assert_eq!(*v, expected);
            }
        }
        assert_eq!(inv[0][0].to_expr().to_string_on(&chart), "1/a");
        assert_eq!(inv[1][0].to_expr().to_string_on(&chart), "-b/a");

        let singular = vec![vec![nf("a"), nf("b")], vec![nf("2*a"), nf("2*b")]];
        assert_eq!(inverse(&singular), Err(Error::SingularJacobian));
    }

    #[test]
    fn determinant_3x3() {
        let chart = Chart::new("m", &["x"]).unwrap();
        let nf = |s: &str| NormalForm::from_expr(&parse(s, &chart).unwrap()).unwrap();
        let m = vec![
            vec![nf("2"), nf("0"), nf("1")],
            vec![nf("1"), nf("x"), nf("0")],
            vec![nf("0"), nf("1"), nf("3")],
        ];
        // 2(3x) - 0 + 1(1) = 6x + 1
        assert_eq!(determinant(&m).unwrap(), nf("6*x + 1"));
    }
}
