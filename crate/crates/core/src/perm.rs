//! Permutations acting on the right of points.
//!
//! Points are stored 0-based. A product `p * q` applies `p` first and then
//! `q`, so `x^(pq) = (x^p)^q`. All text I/O elsewhere in the crate is 1-based.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

/// Largest admitted degree.
pub const MAX_DEGREE: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree {0} is outside 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("image sequence is not a bijection: {0}")]
    NotBijective(String),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("empty generator list")]
    NoGenerators,
    #[error("group order {order} exceeds element cap {cap}")]
    OverCap { order: String, cap: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE);
        Permutation {
            images: (0..degree).map(|x| x as u16).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let degree = images.len();
        if degree == 0 || degree > MAX_DEGREE {
            return Err(PermError::BadDegree(degree));
        }
        let mut seen = vec![false; degree];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= degree {
                return Err(PermError::NotBijective(format!(
                    "image {} of point {} exceeds degree {}",
                    x + 1,
                    i + 1,
                    degree
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijective(format!(
                    "point {} is hit twice",
                    x + 1
                )));
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u16).collect(),
        })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        let mut v = Vec::with_capacity(images.len());
        for (i, &x) in images.iter().enumerate() {
            if x == 0 || x > images.len() {
                return Err(PermError::NotBijective(format!(
                    "image {} of point {} out of range",
                    x,
                    i + 1
                )));
            }
            v.push((x - 1) as u32);
        }
        Self::from_images(v)
    }

    /// Builds a permutation from 1-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(PermError::BadDegree(degree));
        }
        let mut images: Vec<u16> = (0..degree).map(|x| x as u16).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if std::mem::replace(&mut touched[p - 1], true) {
                    return Err(PermError::NotBijective(format!(
                        "point {p} appears in more than one cycle position"
                    )));
                }
            }
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (q - 1) as u16;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.image(point) == point
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.images.iter().enumerate().all(|(i, &x)| self.image(x as usize) == i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// `by^-1 * self * by`, written `self^by`.
    pub fn conjugate(&self, by: &Permutation) -> Self {
        let mut images = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[by.image(i)] = by.images[x as usize];
        }
        Permutation { images }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| other.images[x as usize] == self.images[other.image(i)])
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// smallest point and sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for c in self.cycles() {
            let len = BigUint::from(c.len());
            let g = num_integer_gcd(&acc, &len);
            acc = acc * &len / g;
        }
        acc
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Embeds into a larger degree, shifting every point by `offset` and
    /// fixing everything outside `offset..offset + self.degree()`.
    pub fn embed(&self, degree: usize, offset: usize) -> Self {
        assert!(offset + self.degree() <= degree);
        let mut images: Vec<u16> = (0..degree).map(|x| x as u16).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = (offset + x as usize) as u16;
        }
        Permutation { images }
    }

    /// Restricts to `offset..offset + len`, which must be an invariant block.
    pub fn restrict(&self, offset: usize, len: usize) -> Option<Self> {
        let mut images = Vec::with_capacity(len);
        for i in offset..offset + len {
            let x = self.image(i);
            if x < offset || x >= offset + len {
                return None;
            }
            images.push((x - offset) as u16);
        }
        Some(Permutation { images })
    }
}

fn num_integer_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u32) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        self.then(&rhs)
    }
}

/// Cycle notation, 1-based; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn product_applies_left_first() {
        let p = cyc(3, &[&[1, 2]]);
        let q = cyc(3, &[&[2, 3]]);
        // 1 -> 2 -> 3
        assert_eq!((&p * &q).image(0), 2);
        assert_eq!(format!("{}", &p * &q), "(1 3 2)");
    }

    #[test]
    fn conjugate_matches_definition() {
        let p = cyc(5, &[&[1, 2, 3]]);
        let g = cyc(5, &[&[1, 4], &[2, 5]]);
        let direct = &(&g.inverse() * &p) * &g;
        assert_eq!(p.conjugate(&g), direct);
        assert_eq!(format!("{}", p.conjugate(&g)), "(3 4 5)");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1, 3]).is_err());
        assert!(Permutation::from_one_based(&[1, 4, 2]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_images(vec![]).is_err());
    }

    #[test]
    fn order_and_parity() {
        let p = cyc(7, &[&[1, 2, 3], &[4, 5]]);
        assert_eq!(p.order(), BigUint::from(6u32));
        assert!(!p.is_even());
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert!(Permutation::identity(4).order().is_one());
    }

    #[test]
    fn embed_and_restrict() {
        let p = cyc(3, &[&[1, 2, 3]]);
        let e = p.embed(6, 3);
        assert_eq!(format!("{e}"), "(4 5 6)");
        assert_eq!(e.restrict(3, 3).unwrap(), p);
        assert!(cyc(4, &[&[2, 3]]).restrict(0, 2).is_none());
    }

    #[test]
    fn involution_detection() {
        assert!(cyc(4, &[&[1, 2], &[3, 4]]).is_involution());
        assert!(!Permutation::identity(4).is_involution());
        assert!(!cyc(4, &[&[1, 2, 3]]).is_involution());
    }
}
