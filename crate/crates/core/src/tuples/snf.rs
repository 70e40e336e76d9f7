//! Smith normal form of small integer matrices.

/// U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | … , d_i > 0
/// for i < rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub diag: Vec<i128>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn swap_rows(m: &mut [Vec<i128>], a: usize, b: usize) {
    m.swap(a, b);
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row_a -= c * row_b
fn row_op(m: &mut [Vec<i128>], a: usize, b: usize, c: i128) {
    let rb = m[b].clone();
    for (x, y) in m[a].iter_mut().zip(rb) {
        *x -= c * y;
    }
}

/// col_a -= c * col_b
fn col_op(m: &mut [Vec<i128>], a: usize, b: usize, c: i128) {
    for row in m.iter_mut() {
        row[a] -= c * row[b];
    }
}

pub fn smith(a: &[Vec<i128>], cols: usize) -> Smith {
    let rows = a.len();
    let mut d: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut d, t, bi);
        swap_rows(&mut u, t, bi);
        swap_cols(&mut d, t, bj);
        swap_cols(&mut v, t, bj);
        loop {
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let c = d[i][t].div_euclid(p);
                if c != 0 {
                    row_op(&mut d, i, t, c);
                    row_op(&mut u, i, t, c);
                }
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let c = d[t][j].div_euclid(p);
                if c != 0 {
                    col_op(&mut d, j, t, c);
                    col_op(&mut v, j, t, c);
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold a non-multiple into row t and retry
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        row_op(&mut d, t, i, -1);
                        row_op(&mut u, t, i, -1);
                    }
                }
            }
            // move the smallest nonzero of row/col t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if d[i][t] != 0 && d[i][t].abs() < d[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if d[t][j] != 0 && d[t][j].abs() < d[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                swap_rows(&mut d, t, best.0);
                swap_rows(&mut u, t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut d, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    let rank = diag.iter().filter(|x| **x != 0).count();
    Smith { u, v, diag, rank }
}
