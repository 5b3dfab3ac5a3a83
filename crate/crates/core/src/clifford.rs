// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Clifford group as stabilizer tableaux.
//!
//! All 11520 elements (modulo global phase) are enumerated once from the
//! generators H, S and CX, keeping for each the cheapest gate word (a CX
//! costs ten single-qubit gates). Sampling is uniform over the list.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;

/// Number of two-qubit Cliffords modulo global phase.
pub const GROUP_ORDER: usize = 11520;

/// Generator on local qubit 0 or 1. `CX` is controlled by local 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(u8),
    S(u8),
    CX,
}

impl CliffordGate {
    pub const GENERATORS: [CliffordGate; 5] = [
        CliffordGate::H(0),
        CliffordGate::H(1),
        CliffordGate::S(0),
        CliffordGate::S(1),
        CliffordGate::CX,
    ];

    pub fn cost(self) -> u32 {
        match self {
            CliffordGate::CX => 10,
            _ => 1,
        }
    }
}

/// A signed two-qubit Pauli: bit `j` of `x`/`z` is qubit `j`; `x = z = 1`
/// means Y. `sign` set means a leading −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pauli {
    pub x: u8,
    pub z: u8,
    pub sign: bool,
}

impl Pauli {
    pub const fn new(x: u8, z: u8, sign: bool) -> Self {
        Pauli { x, z, sign }
    }

    /// Phase exponent k in i^k·X^x·Z^z form.
    fn xz_phase(self) -> u32 {
        2 * self.sign as u32 + (self.x & self.z).count_ones()
    }

    fn from_xz(x: u8, z: u8, phase: u32) -> Self {
        let k = (phase + 4 - (x & z).count_ones() % 4) % 4;
        debug_assert!(k.is_multiple_of(2), "non-Hermitian Pauli product");
        Pauli { x, z, sign: k == 2 }
    }
}

/// Images of X0, X1, Z0, Z1 under conjugation C·P·C†.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    pub rows: [Pauli; 4],
}

impl Default for Tableau {
    fn default() -> Self {
        Self::identity()
    }
}

impl Tableau {
    pub const fn identity() -> Self {
        Tableau {
            rows: [
                Pauli::new(1, 0, false),
                Pauli::new(2, 0, false),
                Pauli::new(0, 1, false),
                Pauli::new(0, 2, false),
            ],
        }
    }

    /// Tableau after also applying `gate` (C → G·C).
    pub fn then(mut self, gate: CliffordGate) -> Self {
        for row in &mut self.rows {
            let xb = |q: u8| (row.x >> q) & 1 == 1;
            let zb = |q: u8| (row.z >> q) & 1 == 1;
            match gate {
                CliffordGate::H(q) => {
                    row.sign ^= xb(q) && zb(q);
                    let (x, z) = (xb(q), zb(q));
                    row.x = (row.x & !(1 << q)) | ((z as u8) << q);
                    row.z = (row.z & !(1 << q)) | ((x as u8) << q);
                }
                CliffordGate::S(q) => {
                    row.sign ^= xb(q) && zb(q);
                    row.z ^= (xb(q) as u8) << q;
                }
                CliffordGate::CX => {
                    let (xa, za, xt, zt) = (xb(0), zb(0), xb(1), zb(1));
                    row.sign ^= xa && zt && (xt ^ za ^ true);
                    row.x ^= (xa as u8) << 1;
                    row.z ^= zt as u8;
                }
            }
        }
        self
    }

    pub fn from_word(word: &[CliffordGate]) -> Self {
        word.iter().fold(Self::identity(), |t, &g| t.then(g))
    }

    /// C·P·C† for an arbitrary signed Pauli.
    pub fn conjugate(&self, p: Pauli) -> Pauli {
        let (mut x, mut z, mut phase) = (0u8, 0u8, p.xz_phase());
        let factors = [(p.x & 1, 0), (p.x & 2, 1), (p.z & 1, 2), (p.z & 2, 3)];
        for (present, row) in factors {
            if present == 0 {
                continue;
            }
            let r = self.rows[row];
            // (X^x1 Z^z1)(X^x2 Z^z2) = (−1)^{z1·x2} X^{x1+x2} Z^{z1+z2}
            phase += r.xz_phase() + 2 * (z & r.x).count_ones();
            x ^= r.x;
            z ^= r.z;
        }
        Pauli::from_xz(x, z, phase % 4)
    }

    /// Tableau of `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Tableau) -> Tableau {
        Tableau {
            rows: other.rows.map(|r| self.conjugate(r)),
        }
    }

    /// Rows as a 4×4 binary matrix over (x0, x1, z0, z1).
    fn symplectic(&self) -> [u8; 4] {
        self.rows.map(|r| (r.x & 3) | ((r.z & 3) << 2))
    }

    pub fn inverse(&self) -> Tableau {
        // M⁻¹ = Ω·Mᵀ·Ω over GF(2), Ω swapping the x and z halves
        let m = self.symplectic();
        let omega = |i: usize| (i + 2) % 4;
        let mut inv = [0u8; 4];
        for (i, row) in inv.iter_mut().enumerate() {
            for j in 0..4 {
                // (Ω Mᵀ Ω)[i][j] = Mᵀ[ω(i)][ω(j)] = M[ω(j)][ω(i)]
                *row |= ((m[omega(j)] >> omega(i)) & 1) << j;
            }
        }
        let mut out = Tableau {
            rows: inv.map(|b| Pauli::new(b & 3, (b >> 2) & 3, false)),
        };
        let check = self.compose(&out);
        for (row, img) in out.rows.iter_mut().zip(check.rows) {
            row.sign ^= img.sign;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// The enumerated group with a cheapest word per element.
#[derive(Debug)]
pub struct CliffordGroup {
    elements: Vec<Tableau>,
    words: Vec<Vec<CliffordGate>>,
    index: HashMap<Tableau, usize>,
}

impl CliffordGroup {
    /// Shared instance, built on first use.
    pub fn two_qubit() -> &'static CliffordGroup {
        static GROUP: OnceLock<CliffordGroup> = OnceLock::new();
        GROUP.get_or_init(Self::enumerate)
    }

    /// Uniform-cost search from the identity over the generators.
    fn enumerate() -> Self {
        let mut best: HashMap<Tableau, (u32, Vec<CliffordGate>)> = HashMap::new();
        let mut buckets: Vec<Vec<Tableau>> = vec![vec![Tableau::identity()]];
        best.insert(Tableau::identity(), (0, Vec::new()));
        let mut elements = Vec::with_capacity(GROUP_ORDER);
        let mut words = Vec::with_capacity(GROUP_ORDER);
        let mut index = HashMap::with_capacity(GROUP_ORDER);
        let mut cost = 0usize;
        while cost < buckets.len() {
            let bucket = std::mem::take(&mut buckets[cost]);
            for t in bucket {
                if index.contains_key(&t) || best[&t].0 as usize != cost {
                    continue;
                }
                let word = best[&t].1.clone();
                index.insert(t, elements.len());
                elements.push(t);
                words.push(word.clone());
                for g in CliffordGate::GENERATORS {
                    let next = t.then(g);
                    let c = cost as u32 + g.cost();
                    if best.get(&next).is_some_and(|(b, _)| *b <= c) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(g);
                    best.insert(next, (c, w));
                    if buckets.len() <= c as usize {
                        buckets.resize(c as usize + 1, Vec::new());
                    }
                    buckets[c as usize].push(next);
                }
            }
            cost += 1;
        }
        CliffordGroup { elements, words, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Tableau {
        &self.elements[i]
    }

    pub fn word(&self, i: usize) -> &[CliffordGate] {
        &self.words[i]
    }

    pub fn index_of(&self, t: &Tableau) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.len())
    }

    /// Cheapest word implementing `t`.
    pub fn synthesize(&self, t: &Tableau) -> &[CliffordGate] {
        &self.words[self.index[t]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, kron, CMat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unitary(word: &[CliffordGate]) -> CMat {
        let id = linalg::identity(2);
        let s = linalg::rz(std::f64::consts::FRAC_PI_2);
        // local qubit 0 is the most significant position of the matrix
        word.iter().fold(linalg::identity(4), |u, g| {
            let m = match g {
                CliffordGate::H(0) => kron(&linalg::hadamard(), &id),
                CliffordGate::H(_) => kron(&id, &linalg::hadamard()),
                CliffordGate::S(0) => kron(&s, &id),
                CliffordGate::S(_) => kron(&id, &s),
                CliffordGate::CX => linalg::cx(),
            };
            m * u
        })
    }

    fn pauli_matrix(p: Pauli) -> CMat {
        let single = |q: u8| match ((p.x >> q) & 1, (p.z >> q) & 1) {
            (0, 0) => linalg::identity(2),
            (1, 0) => linalg::pauli_x(),
            (0, 1) => linalg::pauli_z(),
            _ => linalg::pauli_y(),
        };
        let m = kron(&single(0), &single(1));
        if p.sign {
            -m
        } else {
            m
        }
    }

    #[test]
    fn group_has_expected_order() {
        let g = CliffordGroup::two_qubit();
        assert_eq!(g.len(), GROUP_ORDER);
        for i in 0..g.len() {
            assert_eq!(Tableau::from_word(g.word(i)), *g.element(i));
        }
    }

    #[test]
    fn words_are_cheap() {
        let g = CliffordGroup::two_qubit();
        let max_cx = (0..g.len())
            .map(|i| g.word(i).iter().filter(|w| **w == CliffordGate::CX).count())
            .max()
            .unwrap();
        assert_eq!(max_cx, 3);
    }

    #[test]
    fn tableau_matches_matrix_conjugation() {
        let g = CliffordGroup::two_qubit();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let i = g.sample(&mut rng);
            let u = unitary(g.word(i));
            for (row, basis) in g.element(i).rows.iter().zip(Tableau::identity().rows) {
                let lhs = &u * pauli_matrix(basis) * u.adjoint();
                assert!(linalg::max_abs_diff(&lhs, &pauli_matrix(*row)) < 1e-12);
            }
        }
    }

    #[test]
    fn compose_agrees_with_gate_updates() {
        for g in CliffordGate::GENERATORS {
            let single = Tableau::identity().then(g);
            let t = Tableau::from_word(&[CliffordGate::H(0), CliffordGate::CX, CliffordGate::S(1)]);
            assert_eq!(single.compose(&t), t.then(g));
        }
    }

    #[test]
    fn inverses_agree_with_reversed_words() {
        let g = CliffordGroup::two_qubit();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let i = g.sample(&mut rng);
            let t = g.element(i);
            let inv = t.inverse();
            assert!(t.compose(&inv).is_identity());
            assert!(inv.compose(t).is_identity());
            let reversed: Vec<CliffordGate> = g
                .word(i)
                .iter()
                .rev()
                .flat_map(|&gate| match gate {
                    CliffordGate::S(q) => vec![CliffordGate::S(q); 3],
                    other => vec![other],
                })
                .collect();
            assert_eq!(Tableau::from_word(&reversed), inv);
            assert_eq!(Tableau::from_word(g.synthesize(&inv)), inv);
        }
    }
}
