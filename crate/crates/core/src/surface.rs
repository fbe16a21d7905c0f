//! The closed genus-2 surface as a quotient of the hyperbolic plane by the
//! group generated by the side pairings of a regular octagon with interior
//! angles pi/4.
//!
//! Sides are numbered `0..8` counter-clockwise, side `k` running from vertex
//! `k` to vertex `k+1`, with side `k`'s midpoint at polar angle `k pi/4`.
//! Boundary pattern is `a b a^-1 b^-1 c d c^-1 d^-1`:
//!
//! | letter | maps side | onto side |
//! |--------|-----------|-----------|
//! | `a`    | 2         | 0         |
//! | `b`    | 1         | 3         |
//! | `c`    | 6         | 4         |
//! | `d`    | 5         | 7         |
//!
//! so that the relation `[a,b][c,d] = abABcdCD` evaluates to the identity.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypgeom::{dist, HIsometry, HPoint, OrientedGeodesic};

const LETTERS: [char; 8] = ['a', 'A', 'b', 'B', 'c', 'C', 'd', 'D'];

/// Generator index (`0..4` for `a..d`) with an inversion flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Self {
        debug_assert!(generator < 4);
        Letter { generator, inverse }
    }

    /// Index into the 8-element generator table (`a, A, b, B, ...`).
    pub fn index(self) -> usize {
        2 * self.generator as usize + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter::new((i / 2) as u8, i % 2 == 1)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub fn to_char(self) -> char {
        LETTERS[self.index()]
    }

    pub fn from_char(c: char) -> Option<Self> {
        LETTERS.iter().position(|&l| l == c).map(Letter::from_index)
    }

    pub fn all() -> impl Iterator<Item = Letter> {
        (0..8).map(Letter::from_index)
    }
}

/// A freely reduced word in the generators, read left to right as a
/// product of matrices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn single(l: Letter) -> Self {
        GroupWord(vec![l])
    }

    /// Freely reduces `letters`.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &GroupWord) -> Self {
        GroupWord::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// All reduced words of length at most `max_len`, shortest first.
    pub fn ball(max_len: usize) -> Vec<GroupWord> {
        let mut out = vec![GroupWord::identity()];
        let mut frontier = vec![GroupWord::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in Letter::all() {
                    if w.0.last() == Some(&l.inv()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(GroupWord(v));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses a string over `{a,A,b,B,c,C,d,D}`; the result is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::InvalidWord(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupWord::from_letters(letters))
    }
}

/// The deck group: eight isometries (`a, A, b, B, c, C, d, D`).
#[derive(Clone, Debug)]
pub struct FuchsianGroup {
    generators: [HIsometry; 8],
}

impl FuchsianGroup {
    pub fn generator(&self, l: Letter) -> &HIsometry {
        &self.generators[l.index()]
    }

    pub fn relation_word() -> GroupWord {
        "abABcdCD".parse().expect("static word")
    }

    /// Ordered matrix product; the empty word is the identity.
    pub fn eval(&self, w: &GroupWord) -> HIsometry {
        w.letters().iter().fold(HIsometry::identity(), |acc, &l| {
            acc.compose(self.generator(l))
        })
    }

    pub fn relation_residual(&self) -> f64 {
        self.eval(&Self::relation_word()).identity_residual()
    }
}

/// The regular octagon with interior angles pi/4 centered at the origin.
#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub vertices: [HPoint; 8],
    /// Side `k` through vertices `k` and `k+1`; the octagon is on the
    /// non-positive side of each.
    pub sides: [OrientedGeodesic; 8],
    pub circumradius: f64,
    pub inradius: f64,
}

/// Pairing table: `(letter, source side, target side)`.
const PAIRINGS: [(u8, usize, usize); 4] = [(0, 2, 0), (1, 1, 3), (2, 6, 4), (3, 5, 7)];

/// Sides are considered violated only beyond this slack in `<x,u>`.
const DOMAIN_SLACK: f64 = 1e-11;

pub const REDUCTION_CAP: usize = 1000;

impl FundamentalDomain {
    /// The letter `g` whose image `g(P)` of the octagon lies across side `k`.
    pub fn side_letter(k: usize) -> Letter {
        for (g, src, dst) in PAIRINGS {
            if dst == k {
                return Letter::new(g, false);
            }
            if src == k {
                return Letter::new(g, true);
            }
        }
        unreachable!("side index out of range")
    }

    /// The side paired with side `k`.
    pub fn paired_side(k: usize) -> usize {
        PAIRINGS
            .iter()
            .find_map(|&(_, s, d)| {
                if s == k {
                    Some(d)
                } else if d == k {
                    Some(s)
                } else {
                    None
                }
            })
            .expect("side index out of range")
    }

    /// Interior angle at octagon vertex `k`.
    pub fn interior_angle(&self, k: usize) -> f64 {
        let p = &self.vertices[k];
        crate::hypgeom::angle(p, &self.vertices[(k + 1) % 8], &self.vertices[(k + 7) % 8])
            .expect("octagon is non-degenerate")
    }

    pub fn contains(&self, p: &HPoint, slack: f64) -> bool {
        self.sides.iter().all(|s| s.side(p) <= slack)
    }
}

/// Builds the genus-2 surface: the deck group and its fundamental octagon.
pub fn build_genus2() -> (FuchsianGroup, FundamentalDomain) {
    let cot = (PI / 8.0).tan().recip();
    let circumradius = (cot * cot).acosh();
    // center, side midpoint and vertex form a right triangle with angles pi/8, pi/8
    let inradius = ((PI / 8.0).cos() / (PI / 8.0).sin()).acosh();
    let vertices: [HPoint; 8] =
        std::array::from_fn(|k| HPoint::polar(circumradius, k as f64 * PI / 4.0 - PI / 8.0));
    let sides: [OrientedGeodesic; 8] = std::array::from_fn(|k| {
        OrientedGeodesic::through(&vertices[k], &vertices[(k + 1) % 8]).expect("distinct vertices")
    });

    // rotate side `src` to the negative x axis, push across to the positive
    // one, then rotate onto side `dst`
    let pairing = |src: usize, dst: usize| {
        HIsometry::rotation(dst as f64 * PI / 4.0)
            .compose(&HIsometry::translation_x(2.0 * inradius))
            .compose(&HIsometry::rotation(PI - src as f64 * PI / 4.0))
    };
    let mut generators = [HIsometry::identity(); 8];
    for (g, src, dst) in PAIRINGS {
        let m = pairing(src, dst);
        generators[2 * g as usize] = m;
        generators[2 * g as usize + 1] = m.inverse();
    }
    (
        FuchsianGroup { generators },
        FundamentalDomain {
            vertices,
            sides,
            circumradius,
            inradius,
        },
    )
}

/// Moves `p` into the closed octagon by greedy side crossing. Returns the
/// reduced point `q` and the word `w` with `eval(w) q = p`.
pub fn reduce_to_domain(
    group: &FuchsianGroup,
    domain: &FundamentalDomain,
    p: &HPoint,
) -> Result<(HPoint, GroupWord)> {
    let mut q = *p;
    let mut word = Vec::new();
    for _ in 0..REDUCTION_CAP {
        let worst = domain
            .sides
            .iter()
            .enumerate()
            .map(|(k, s)| (k, s.side(&q)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("eight sides");
        if worst.1 <= DOMAIN_SLACK {
            return Ok((q, GroupWord::from_letters(word)));
        }
        let l = FundamentalDomain::side_letter(worst.0);
        q = group.generator(l.inv()).apply(&q);
        word.push(l);
    }
    Err(Error::ReductionDiverged(REDUCTION_CAP))
}

/// Distance between the projections of `p` and `q` to the surface, searched
/// over deck translates of word length at most 4 after reduction.
pub fn surface_distance(
    group: &FuchsianGroup,
    domain: &FundamentalDomain,
    p: &HPoint,
    q: &HPoint,
) -> Result<f64> {
    let (p, _) = reduce_to_domain(group, domain, p)?;
    let (q, _) = reduce_to_domain(group, domain, q)?;
    Ok(GroupWord::ball(4)
        .iter()
        .map(|w| dist(&p, &group.eval(w).apply(&q)))
        .fold(f64::INFINITY, f64::min))
}
