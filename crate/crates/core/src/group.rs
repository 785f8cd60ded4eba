//! Finite group multiplication tables.

use crate::error::{Error, Result};

/// A finite group given by its Cayley table. Construct via [`GroupTable::new`],
/// which validates the group axioms and derives the identity and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    label: Option<String>,
    product: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(product: Vec<Vec<usize>>, label: Option<String>) -> Result<Self> {
        let n = product.len();
        if n == 0 {
            return Err(Error::InvalidGroup("closure: empty table".into()));
        }
        for (i, row) in product.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "closure: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&k) = row.iter().find(|&&k| k >= n) {
                return Err(Error::InvalidGroup(format!(
                    "closure: entry {k} in row {i} is not an element index"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if product[product[a][b]][c] != product[a][product[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity: ({a}*{b})*{c} != {a}*({b}*{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| product[e][g] == g && product[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("identity: no two-sided identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| product[g][h] == identity && product[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("inverse: element {g} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(Self {
            label,
            product,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.product.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn product_table(&self) -> &[Vec<usize>] {
        &self.product
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.product[a][b] == self.product[b][a]))
    }

    /// ℤ/n with addition mod n.
    pub fn cyclic(n: usize) -> Self {
        let product = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(product, Some(format!("Z{n}"))).expect("cyclic group table")
    }

    /// Direct product; element `(g, h)` has index `g * |H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (ng, nh) = (g.order(), h.order());
        let product = (0..ng * nh)
            .map(|x| {
                (0..ng * nh)
                    .map(|y| g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh))
                    .collect()
            })
            .collect();
        let label = match (g.label(), h.label()) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        Self::new(product, label).expect("direct product of groups")
    }

    /// Symmetric group on `k` letters; permutations in lexicographic order
    /// (identity first), product `(p q)(i) = p(q(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        Self::from_permutations(&perms, format!("S{k}"))
    }

    /// Dihedral group of order `2m` as symmetries of an m-gon.
    pub fn dihedral(m: usize) -> Self {
        let mut perms = Vec::with_capacity(2 * m);
        for r in 0..m {
            perms.push((0..m).map(|i| (i + r) % m).collect::<Vec<_>>());
        }
        for r in 0..m {
            perms.push((0..m).map(|i| (m + r - i) % m).collect::<Vec<_>>());
        }
        Self::from_permutations(&perms, format!("D{m}"))
    }

    /// Quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // unit index: 0=1 1=i 2=j 3=k; sign bit adds 4
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let product = (0..8)
            .map(|a: usize| {
                (0..8)
                    .map(|b: usize| {
                        let (u, neg) = UNIT[a % 4][b % 4];
                        let sign = neg ^ (a >= 4) ^ (b >= 4);
                        u + if sign { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        Self::new(product, Some("Q8".into())).expect("quaternion table")
    }

    fn from_permutations(perms: &[Vec<usize>], label: String) -> Self {
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed set");
        let product = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&q.iter().map(|&i| p[i]).collect()))
                    .collect()
            })
            .collect();
        Self::new(product, Some(label)).expect("permutation group table")
    }

    /// Every group used by the built-in test corpus (orders 2 through 8).
    pub fn corpus() -> Vec<Self> {
        let z2 = Self::cyclic(2);
        vec![
            z2.clone(),
            Self::cyclic(3),
            Self::cyclic(4),
            Self::direct_product(&z2, &z2),
            Self::cyclic(5),
            Self::symmetric(3),
            Self::cyclic(6),
            Self::cyclic(7),
            Self::cyclic(8),
            Self::direct_product(&z2, &Self::cyclic(4)),
            Self::direct_product(&Self::direct_product(&z2, &z2), &z2),
            Self::dihedral(4),
            Self::quaternion(),
        ]
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}
