//! Residue rings `O/m` and their unit groups.

use std::collections::VecDeque;

use num_integer::Integer;

use super::field::FieldId;
use super::gaussian::Gaussian;
use super::ideal::Ideal;
use super::smith::{HermiteAccumulator, Quotient};
use crate::error::{domain, Result};

/// `O/m`, with residues indexed by `0..N(m)`.
///
/// Over `Q(i)` the ideal `(g)` is the lattice spanned by `(a, 0)` and `(b, c)`; the
/// residue `u + v*i` with `0 <= u < a`, `0 <= v < c` has index `u + a*v`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: Ideal,
    a: i128,
    b: i128,
    c: i128,
}

impl ResidueRing {
    pub fn new(m: &Ideal) -> ResidueRing {
        let g = m.gen();
        match m.field() {
            FieldId::Q => ResidueRing { modulus: m.clone(), a: g.re, b: 0, c: 1 },
            FieldId::Qi => {
                let e = g.re.extended_gcd(&g.im);
                let c = e.gcd.abs();
                let n = g.norm();
                let a = n / c;
                // (x + y i) g has imaginary part x*im + y*re = c
                let (x, y) = if e.gcd < 0 { (-e.y, -e.x) } else { (e.y, e.x) };
                let w = Gaussian::new(x, y) * g;
                debug_assert_eq!(w.im, c);
                ResidueRing { modulus: m.clone(), a, b: w.re.rem_euclid(a), c }
            }
        }
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        (self.a * self.c) as u64
    }

    pub fn index(&self, z: Gaussian) -> u64 {
        let q = z.im.div_euclid(self.c);
        let v = z.im - q * self.c;
        let u = (z.re - q * self.b).rem_euclid(self.a);
        (u + self.a * v) as u64
    }

    /// The reduced representative with the given index.
    pub fn element(&self, idx: u64) -> Gaussian {
        let idx = idx as i128;
        Gaussian::new(idx % self.a, idx / self.a)
    }

    pub fn reduce(&self, z: Gaussian) -> Gaussian {
        self.element(self.index(z))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        self.index(self.element(x) * self.element(y))
    }

    pub fn pow(&self, x: u64, mut e: u128) -> u64 {
        let mut acc = self.index(Gaussian::ONE);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: u64) -> bool {
        self.modulus.coprime_to_element(&self.element(x)) || self.modulus.is_unit()
    }

    pub fn equal(&self, x: Gaussian, y: Gaussian) -> bool {
        self.index(x) == self.index(y)
    }
}

/// The unit group `(O/m)^*` as a product of cyclic groups with a discrete-log table.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    ring: ResidueRing,
    /// Orders of the cyclic factors (all `> 1`).
    pub invariants: Vec<u64>,
    /// A generator of each cyclic factor.
    pub generators: Vec<Gaussian>,
    /// `dlog[idx]` for unit residues, flattened with stride `invariants.len()`.
    dlog: Vec<u32>,
    is_unit: Vec<bool>,
}

impl UnitGroup {
    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Coordinates of `z` with respect to [`UnitGroup::generators`].
    pub fn dlog(&self, z: Gaussian) -> Result<Vec<u64>> {
        let idx = self.ring.index(z) as usize;
        if !self.is_unit[idx] {
            return domain(format!("{z} is not coprime to {}", self.ring.modulus()));
        }
        let k = self.rank();
        Ok(self.dlog[idx * k..(idx + 1) * k].iter().map(|x| *x as u64).collect())
    }

    /// Evaluates the product of generators with the given exponents.
    pub fn exp(&self, coords: &[u64]) -> Gaussian {
        let mut acc = self.ring.index(Gaussian::ONE);
        for (g, e) in self.generators.iter().zip(coords) {
            acc = self.ring.mul(acc, self.ring.pow(self.ring.index(*g), *e as u128));
        }
        self.ring.element(acc)
    }

    /// Inverse of a unit residue.
    pub fn inverse(&self, z: Gaussian) -> Result<Gaussian> {
        let d = self.dlog(z)?;
        let neg: Vec<u64> = d.iter().zip(&self.invariants).map(|(x, n)| (n - x) % n).collect();
        Ok(self.exp(&neg))
    }
}

/// Computes `(O/m)^*`: generators, cyclic orders and a discrete-log table.
pub fn residue_ring_units(m: &Ideal) -> Result<UnitGroup> {
    if m.norm() <= 1 {
        return domain("residue ring of the unit ideal");
    }
    let ring = ResidueRing::new(m);
    let n = ring.size() as usize;
    let one = ring.index(Gaussian::ONE) as usize;
    let is_unit: Vec<bool> = (0..n as u64).map(|x| ring.is_unit(x)).collect();

    // greedy generating set
    let mut gens: Vec<u64> = Vec::new();
    let mut in_sub = vec![false; n];
    in_sub[one] = true;
    let mut members = vec![one as u64];
    for x in 0..n {
        if !is_unit[x] || in_sub[x] {
            continue;
        }
        gens.push(x as u64);
        // close the subgroup under the new generator
        let mut frontier = members.clone();
        while let Some(y) = frontier.pop() {
            let z = ring.mul(y, x as u64) as usize;
            if !in_sub[z] {
                in_sub[z] = true;
                members.push(z as u64);
                frontier.push(z as u64);
            }
        }
    }
    let k = gens.len();
    if k == 0 {
        return Ok(UnitGroup {
            ring,
            invariants: Vec::new(),
            generators: Vec::new(),
            dlog: Vec::new(),
            is_unit,
        });
    }

    // BFS spanning tree on the Cayley graph; every non-tree edge gives a relation
    let mut vec_of: Vec<Option<Vec<i128>>> = vec![None; n];
    vec_of[one] = Some(vec![0; k]);
    let mut queue = VecDeque::from([one as u64]);
    let mut hnf = HermiteAccumulator::new(k);
    while let Some(x) = queue.pop_front() {
        let vx = vec_of[x as usize].clone().unwrap();
        for (i, g) in gens.iter().enumerate() {
            let y = ring.mul(x, *g) as usize;
            let mut vy = vx.clone();
            vy[i] += 1;
            match &vec_of[y] {
                None => {
                    vec_of[y] = Some(vy);
                    queue.push_back(y as u64);
                }
                Some(w) => {
                    let rel: Vec<i128> = vy.iter().zip(w).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|t| *t != 0) {
                        hnf.insert(rel);
                    }
                }
            }
        }
    }
    let q: Quotient = hnf.into_quotient();
    let keep: Vec<usize> = (0..k).filter(|j| q.invariants[*j] != 1).collect();
    let invariants: Vec<u64> = keep.iter().map(|j| q.invariants[*j] as u64).collect();

    // generators of the cyclic factors
    let gen_orders: Vec<u128> = gens.iter().map(|g| element_order(&ring, *g)).collect();
    let generators: Vec<Gaussian> = keep
        .iter()
        .map(|j| {
            let mut acc = one as u64;
            for (i, g) in gens.iter().enumerate() {
                let e = q.basis_vector(*j)[i].rem_euclid(gen_orders[i] as i128) as u128;
                acc = ring.mul(acc, ring.pow(*g, e));
            }
            ring.element(acc)
        })
        .collect();

    let kk = keep.len();
    let mut dlog = vec![0u32; n * kk];
    for x in 0..n {
        if let Some(vx) = &vec_of[x] {
            let p = q.project(vx);
            for (t, j) in keep.iter().enumerate() {
                dlog[x * kk + t] = p[*j] as u32;
            }
        }
    }
    Ok(UnitGroup { ring, invariants, generators, dlog, is_unit })
}

fn element_order(ring: &ResidueRing, x: u64) -> u128 {
    let one = ring.index(Gaussian::ONE);
    let mut y = x;
    let mut k = 1u128;
    while y != one {
        y = ring.mul(y, x);
        k += 1;
    }
    k
}
