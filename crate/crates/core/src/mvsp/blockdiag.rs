use super::{bruhat, FrWitness, MvspError, OrderedPartition};

/// Bring an optimal witness for a leading matrix into block-diagonal form.
///
/// Writes `S = pi_S U` and `T = M pi_T` (triangular factors from Bruhat
/// decompositions), drops the entries of `U` and `M` outside the diagonal
/// blocks of the partitions, and reorders rows (columns) inside each block so
/// that the zero-block rows (columns) come first.
pub fn block_diagonalize_witness(
    w: &FrWitness,
    rows: &OrderedPartition,
    cols: &OrderedPartition,
) -> Result<FrWitness, MvspError> {
    let n = w.n();
    if rows.len() != n || cols.len() != n {
        return Err(MvspError::PartitionMismatch);
    }
    let w = w.canonical();
    let (r, s) = (w.r(), w.s_size());

    // S = L pi_S U  =>  L^{-1} S = pi_S U
    let bs = bruhat(&w.s)?;
    let x: Vec<usize> = bs.perm[..r].to_vec();
    let mut u = bs.u.clone();
    for p in 0..n {
        for q in 0..n {
            if rows.block_of(p) != rows.block_of(q) {
                u.set(p, q, 0);
            }
        }
    }

    // T = L_T pi_T U_T  =>  T U_T^{-1} = M pi_T with M = L_T
    let bt = bruhat(&w.t)?;
    let mut inv_pt = vec![0; n];
    for (b, &j) in bt.perm.iter().enumerate() {
        inv_pt[j] = b;
    }
    let y: Vec<usize> = (0..s).map(|j| inv_pt[j]).collect();
    let mut m = bt.l.clone();
    for p in 0..n {
        for q in 0..n {
            if cols.block_of(p) != cols.block_of(q) {
                m.set(p, q, 0);
            }
        }
    }

    let (row_order, new_rows) = block_first(rows, &x);
    let (col_order, new_cols) = block_first(cols, &y);
    Ok(FrWitness { s: u.select_rows(&row_order), t: m.select_cols(&col_order), rows: new_rows, cols: new_cols })
}

/// Order placing the members of `marked` first inside each block; also
/// returns their new positions.
fn block_first(part: &OrderedPartition, marked: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::new();
    let mut positions = Vec::new();
    for b in part.blocks() {
        for i in b.clone() {
            if marked.contains(&i) {
                positions.push(order.len());
                order.push(i);
            }
        }
        for i in b.clone() {
            if !marked.contains(&i) {
                order.push(i);
            }
        }
    }
    (order, positions)
}

/// True when `m` vanishes outside the diagonal blocks.
#[cfg(test)]
pub(crate) fn is_block_diagonal(m: &crate::scalar::Mat, rows: &OrderedPartition, cols: &OrderedPartition) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j) == 0 || rows.block_of(i) == cols.block_of(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvsp::mvsp_exhaustive;
    use crate::scalar::{Fp, Mat};
    use crate::symbolic::SymbolicMatrix;

    #[test]
    fn single_block_keeps_zero_block() {
        let f = Fp::new(3).unwrap();
        let a = SymbolicMatrix::from_triples(f, 3, 3, &[vec![(0, 0, 1), (0, 1, 1)], vec![(1, 0, 1)]]);
        let w = mvsp_exhaustive(&a, true, 5000).unwrap().witness;
        let p = OrderedPartition::trivial(3);
        let b = block_diagonalize_witness(&w, &p, &p).unwrap();
        assert!(b.verify(&a));
        assert_eq!((b.r(), b.s_size()), (w.r(), w.s_size()));
    }

    #[test]
    fn diagonal_witness_unchanged() {
        let f = Fp::new(5).unwrap();
        let id = Mat::identity(f, 3);
        let w = FrWitness { s: id.clone(), t: id.clone(), rows: vec![0], cols: vec![0, 1] };
        let p = OrderedPartition::from_sizes(&[1, 2]);
        let b = block_diagonalize_witness(&w, &p, &p).unwrap();
        assert_eq!(b, w);
    }

    #[test]
    fn partition_mismatch() {
        let f = Fp::new(5).unwrap();
        let id = Mat::identity(f, 3);
        let w = FrWitness { s: id.clone(), t: id, rows: vec![0], cols: vec![0] };
        let p = OrderedPartition::trivial(2);
        assert_eq!(block_diagonalize_witness(&w, &p, &p), Err(MvspError::PartitionMismatch));
    }

    #[test]
    fn dense_witness_on_block_structured_leading_matrix() {
        // leading matrix respecting the partition {0}, {1, 2}: A = x1 E00 + x2 (E12)
        let f = Fp::new(5).unwrap();
        let a = SymbolicMatrix::from_triples(f, 3, 3, &[vec![(0, 0, 1)], vec![(1, 2, 1)]]);
        let w = mvsp_exhaustive(&a, true, 5000).unwrap().witness;
        // scramble S and T with block-compatible-looking dense factors
        let s2 = Mat::from_i64_rows(f, &[vec![1, 0, 0], vec![2, 1, 0], vec![3, 4, 1]]).mul(&w.s);
        let t2 = w.t.mul(&Mat::from_i64_rows(f, &[vec![1, 2, 3], vec![0, 1, 4], vec![0, 0, 1]]));
        let dense = FrWitness { s: s2, t: t2, rows: w.rows.clone(), cols: w.cols.clone() };
        assert!(dense.verify(&a));
        let p = OrderedPartition::from_sizes(&[1, 2]);
        let b = block_diagonalize_witness(&dense, &p, &p).unwrap();
        assert!(b.verify(&a));
        assert!(is_block_diagonal(&b.s, &p, &p));
        assert!(is_block_diagonal(&b.t, &p, &p));
        assert_eq!(b.value(), w.value());
    }
}
