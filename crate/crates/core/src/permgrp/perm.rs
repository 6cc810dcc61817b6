use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::PermError;

/// A permutation of `{0, .., degree-1}`; `images[i]` is the image of `i`.
///
/// Products compose left to right: `(x * y)(i) = y(x(i))`, so points are
/// acted on from the right as in most computer algebra systems.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Parse cycle notation with 1-based points, e.g. `"(1 2 3)(4 5)"` or
    /// `"(1,2,3)(4,5)"`; `"()"` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| PermError::Parse(format!("expected '(' in {s:?}")))?;
            let close = open.find(')').ok_or_else(|| PermError::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let v: usize = t.parse().map_err(|_| PermError::Parse(format!("bad point {t:?} in {s:?}")))?;
                    if v == 0 || v > degree {
                        return Err(PermError::Parse(format!("point {v} out of range 1..={degree} in {s:?}")));
                    }
                    Ok(v - 1)
                })
                .collect::<Result<Vec<_>, _>>()?;
            for &pt in &pts {
                if seen[pt] {
                    return Err(PermError::Parse(format!("point {} repeated in {s:?}", pt + 1)));
                }
                seen[pt] = true;
            }
            for w in 0..pts.len() {
                images[pts[w]] = pts[(w + 1) % pts.len()] as u32;
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// Parse 1-based image lists as used in catalog files.
    pub fn from_one_based(images: &[u32]) -> Result<Self, PermError> {
        if images.iter().any(|&x| x == 0) {
            return Err(PermError::Parse("image lists are 1-based".into()));
        }
        Permutation::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut r = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                r = r.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        r
    }

    /// Cycles of length > 1, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    /// Place `self` on points `offset..offset+degree` of a larger set.
    pub fn shifted(&self, offset: usize, total: usize) -> Permutation {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_cycles() {
        let p = Permutation::parse_cycles("(1 2 3)(4,5)", 6).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3, 5]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        assert!(!p.is_even());
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 3).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::parse_cycles("(1 2)", 3).unwrap();
        let b = Permutation::parse_cycles("(2 3)", 3).unwrap();
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.compose(&b).image(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }
}
