//! Finite abelian groups presented by integer relations, via Smith normal form.

/// The quotient `Z^k / L` for a full-rank relation lattice `L`.
///
/// Coordinates `x` (a row vector) map to `x * v`, read modulo `invariants`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    /// Diagonal entries of the Smith form, including trivial `1`s.
    pub invariants: Vec<i128>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

impl Quotient {
    /// Builds the quotient of `Z^k` by the span of `relations`.
    pub fn new(k: usize, relations: &[Vec<i128>]) -> Quotient {
        let mut h = HermiteAccumulator::new(k);
        for r in relations {
            h.insert(r.clone());
        }
        h.into_quotient()
    }

    pub fn order(&self) -> i128 {
        self.invariants.iter().product()
    }

    /// Image of `x` in the invariant-factor coordinates.
    pub fn project(&self, x: &[i128]) -> Vec<i128> {
        let k = self.invariants.len();
        (0..k)
            .map(|j| {
                let s: i128 = (0..k).map(|i| x[i] * self.v[i][j]).sum();
                s.rem_euclid(self.invariants[j])
            })
            .collect()
    }

    /// Old coordinates of the `j`-th new basis vector.
    pub fn basis_vector(&self, j: usize) -> &[i128] {
        &self.v_inv[j]
    }
}

/// Incremental row-echelon basis of an integer lattice.
#[derive(Clone, Debug)]
pub struct HermiteAccumulator {
    k: usize,
    rows: Vec<Option<Vec<i128>>>,
}

impl HermiteAccumulator {
    pub fn new(k: usize) -> Self {
        HermiteAccumulator { k, rows: vec![None; k] }
    }

    pub fn insert(&mut self, mut row: Vec<i128>) {
        assert_eq!(row.len(), self.k);
        for j in 0..self.k {
            if row[j] == 0 {
                continue;
            }
            match self.rows[j].take() {
                None => {
                    if row[j] < 0 {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows[j] = Some(row);
                    self.reduce_above(j);
                    return;
                }
                Some(b) => {
                    let (g, x, y) = egcd(b[j], row[j]);
                    let (bj, rj) = (b[j] / g, row[j] / g);
                    let nb: Vec<i128> = (0..self.k).map(|t| x * b[t] + y * row[t]).collect();
                    let nr: Vec<i128> = (0..self.k).map(|t| rj * b[t] - bj * row[t]).collect();
                    self.rows[j] = Some(nb);
                    self.reduce_above(j);
                    row = nr;
                }
            }
        }
    }

    /// Keeps entries to the right of each pivot reduced modulo later pivots.
    fn reduce_above(&mut self, _j: usize) {
        for j in (0..self.k).rev() {
            let Some(pj) = self.rows[j].clone() else { continue };
            for i in 0..j {
                if let Some(ri) = self.rows[i].as_mut() {
                    let q = ri[j].div_euclid(pj[j]);
                    if q != 0 {
                        for t in 0..self.k {
                            ri[t] -= q * pj[t];
                        }
                    }
                }
            }
        }
    }

    /// The accumulated lattice must have full rank.
    pub fn into_quotient(self) -> Quotient {
        let mut d: Vec<Vec<i128>> = self
            .rows
            .into_iter()
            .map(|r| r.expect("relation lattice must have full rank"))
            .collect();
        smith(&mut d)
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn smith(d: &mut [Vec<i128>]) -> Quotient {
    let k = d.len();
    let mut v: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i128).collect()).collect();
    let mut vi = v.clone();
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..k {
                    if d[i][j] != 0 && best.is_none_or(|(a, b)| d[i][j].abs() < d[a][b].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap(t, bi);
            if bj != t {
                for row in d.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
                vi.swap(t, bj);
            }
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    for c in 0..k {
                        d[i][c] -= q * d[t][c];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..k {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    for r in 0..k {
                        d[r][j] -= q * d[r][t];
                        v[r][j] -= q * v[r][t];
                    }
                    for c in 0..k {
                        vi[t][c] += q * vi[j][c];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let mut fixed = true;
            'outer: for i in t + 1..k {
                for j in t + 1..k {
                    if d[i][j] % p != 0 {
                        for c in 0..k {
                            d[t][c] += d[i][c];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[t][t] < 0 {
            d[t].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Quotient { invariants: (0..k).map(|t| d[t][t]).collect(), v, v_inv: vi }
}
