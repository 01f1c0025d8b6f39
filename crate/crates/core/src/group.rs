//! Finite groups given by a multiplication table.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;

use crate::error::{input, Error, Result};
use crate::linalg::{c, ComplexMatrix};

/// Groups up to this order get an exhaustive associativity check.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;
const MAX_ORDER: usize = 120;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    order: usize,
    product: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates the table against the group axioms; identity and inverses
    /// are inferred.
    pub fn from_table(name: impl Into<String>, order: usize, product: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::GroupAxiom("a group has at least one element".into()));
        }
        if order > MAX_ORDER {
            return input(format!("group order {order} exceeds the supported maximum {MAX_ORDER}"));
        }
        if product.len() != order * order {
            return input(format!(
                "product table has {} entries, expected {}",
                product.len(),
                order * order
            ));
        }
        if let Some(pos) = product.iter().position(|&x| x >= order) {
            return Err(Error::GroupAxiom(format!(
                "closure: product({}, {}) = {} is not an element",
                pos / order,
                pos % order,
                product[pos]
            )));
        }
        let mul = |a: usize, b: usize| product[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::GroupAxiom("identity: no two-sided identity element".into()))?;

        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| Error::GroupAxiom(format!("inverse: element {a} has no inverse")))?;
        }

        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(Error::GroupAxiom(format!(
                    "associativity fails at ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = crate::random::stream(0x5eed_a550c, 0);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                check(
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                )?;
            }
        }

        Ok(Self {
            name: name.into(),
            order,
            product,
            identity,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `s -> g s`, the permutation underlying the left regular representation.
    pub fn left_translation(&self, g: usize) -> Vec<usize> {
        self.elements().map(|s| self.mul(g, s)).collect()
    }

    /// `lambda(g)`, with `lambda(g) delta_s = delta_{gs}`.
    pub fn regular_representation(&self, g: usize) -> Result<ComplexMatrix> {
        if g >= self.order {
            return input(format!("element {g} out of range for group of order {}", self.order));
        }
        let n = self.order;
        let mut m = ComplexMatrix::zeros(n, n);
        for s in 0..n {
            m[(self.mul(g, s), s)] = c(1.0, 0.0);
        }
        Ok(m)
    }

    /// Whether `phi` (given on elements) is a bijective homomorphism.
    pub fn is_automorphism(&self, phi: &[usize]) -> bool {
        if phi.len() != self.order {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &x in phi {
            if x >= self.order || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        self.elements().all(|a| {
            self.elements()
                .all(|b| phi[self.mul(a, b)] == self.mul(phi[a], phi[b]))
        })
    }

    /// Plain-text table: order on the first line, then `n` rows of 0-based
    /// indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in self.elements() {
            let row: Vec<String> = self.elements().map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty group file".into(),
        })?;
        let order: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("expected group order, found {first:?}"),
        })?;
        let mut product = Vec::with_capacity(order * order);
        let mut rows = 0;
        for (ln, line) in lines {
            if rows == order {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("more than {order} table rows"),
                });
            }
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| Error::Parse {
                        line: ln,
                        msg: format!("not an element index: {tok:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != order {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("row has {} entries, expected {order}", row.len()),
                });
            }
            product.extend(row);
            rows += 1;
        }
        if rows != order {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("found {rows} table rows, expected {order}"),
            });
        }
        Self::from_table(name, order, product)
    }
}

/// Built-in group families, and tables loaded from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    /// The groups every sweep and structural suite runs over.
    pub fn builtin_suite() -> Vec<GroupSpec> {
        let mut v: Vec<GroupSpec> = (2..=12).map(GroupSpec::Cyclic).collect();
        v.push(GroupSpec::klein_four());
        v.push(GroupSpec::Dihedral(4));
        v.push(GroupSpec::Dihedral(5));
        v.push(GroupSpec::Quaternion8);
        v.push(GroupSpec::Symmetric(3));
        v.push(GroupSpec::Symmetric(4));
        v
    }

    pub fn klein_four() -> Self {
        GroupSpec::DirectProduct(Box::new(GroupSpec::Cyclic(2)), Box::new(GroupSpec::Cyclic(2)))
    }

    pub fn build(&self) -> Result<GroupTable> {
        let name = self.to_string();
        match self {
            GroupSpec::Cyclic(n) => {
                let n = *n;
                if n == 0 {
                    return input("cyclic group needs n >= 1");
                }
                GroupTable::from_table(name, n, table(n, |a, b| (a + b) % n))
            }
            GroupSpec::Dihedral(n) => {
                let n = *n;
                if n == 0 {
                    return input("dihedral group needs n >= 1");
                }
                // index k + n f stands for r^k s^f
                let mul = |x: usize, y: usize| {
                    let (a, f) = (x % n, x / n);
                    let (b, g) = (y % n, y / n);
                    let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                    k + n * ((f + g) % 2)
                };
                GroupTable::from_table(name, 2 * n, table(2 * n, mul))
            }
            GroupSpec::Quaternion8 => GroupTable::from_table(name, 8, table(8, quaternion_mul)),
            GroupSpec::Symmetric(n) => {
                let n = *n;
                if n == 0 || n > 5 {
                    return input(format!("symmetric(n) supports 1 <= n <= 5, got {n}"));
                }
                let perms = permutations(n);
                let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
                // (p q)(x) = p(q(x))
                let mul = |a: usize, b: usize| {
                    let comp: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
                    index(&comp)
                };
                GroupTable::from_table(name, perms.len(), table(perms.len(), mul))
            }
            GroupSpec::DirectProduct(a, b) => {
                let ga = a.build()?;
                let gb = b.build()?;
                let nb = gb.order();
                let mul = |x: usize, y: usize| {
                    ga.mul(x / nb, y / nb) * nb + gb.mul(x % nb, y % nb)
                };
                GroupTable::from_table(name, ga.order() * nb, table(ga.order() * nb, mul))
            }
            GroupSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
                GroupTable::parse_text(name, &text)
            }
        }
    }
}

fn table(n: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    (0..n * n).map(|i| mul(i / n, i % n)).collect()
}

/// Index `sign * 4 + unit`, units ordered `1, i, j, k`.
fn quaternion_mul(x: usize, y: usize) -> usize {
    // unit products as (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let (s1, u1) = (x / 4, x % 4);
    let (s2, u2) = (y / 4, y % 4);
    let (s3, u3) = UNIT[u1][u2];
    ((s1 + s2 + s3) % 2) * 4 + u3
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Quaternion8 => write!(f, "Q8"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::DirectProduct(a, b) if **a == GroupSpec::Cyclic(2) && **b == GroupSpec::Cyclic(2) => {
                write!(f, "K4")
            }
            GroupSpec::DirectProduct(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `Z<n>`/`C<n>`, `D<n>`, `S<n>`, `Q8`, `K4`/`V4`/`Klein4`, `A x B`,
    /// `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        let parts: Vec<&str> = s.split(['x', '×']).collect();
        if parts.len() > 1 {
            let mut specs = parts.iter().map(|p| p.parse::<GroupSpec>());
            let first = specs.next().expect("split is non-empty")?;
            return specs.try_fold(first, |acc, next| {
                Ok(GroupSpec::DirectProduct(Box::new(acc), Box::new(next?)))
            });
        }
        match s.to_ascii_uppercase().as_str() {
            "Q8" => return Ok(GroupSpec::Quaternion8),
            "K4" | "V4" | "KLEIN4" | "KLEIN-4" => return Ok(GroupSpec::klein_four()),
            _ => {}
        }
        let unknown = || Error::Input(format!("unknown group family {s:?}"));
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        match family.to_ascii_uppercase() {
            'Z' | 'C' => Ok(GroupSpec::Cyclic(n)),
            'D' => Ok(GroupSpec::Dihedral(n)),
            'S' => Ok(GroupSpec::Symmetric(n)),
            _ => Err(unknown()),
        }
    }
}
