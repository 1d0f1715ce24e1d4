//! Degrees in N^k, colours, colour words, and the abelianization map.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the k edge colours. Stored zero-based; rendered one-based as `c1`,
/// `c2`, ... to match the instance format.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Colour(usize);

impl Colour {
    pub fn new(index: usize) -> Self {
        Colour(index)
    }

    /// Parses a one-based colour, validating against k.
    pub fn from_one_based(colour: usize, k: usize) -> Option<Self> {
        if (1..=k).contains(&colour) {
            Some(Colour(colour - 1))
        } else {
            None
        }
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn one_based(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0 + 1)
    }
}

/// An element of N^k. The coordinatewise partial order, join, and the standard
/// generators e_i are the only structure the rest of the crate needs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree {
    coords: Vec<u32>,
}

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree {
            coords: vec![0; k],
        }
    }

    /// The standard generator e_i.
    pub fn unit(k: usize, colour: Colour) -> Self {
        let mut coords = vec![0; k];
        coords[colour.index()] = 1;
        Degree { coords }
    }

    pub fn from_coords(coords: Vec<u32>) -> Self {
        Degree { coords }
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> u32 {
        self.coords[i]
    }

    pub fn coord(&self, colour: Colour) -> u32 {
        self.coords[colour.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// |m| = sum of coordinates.
    pub fn total(&self) -> u32 {
        self.coords.iter().sum()
    }

    /// Coordinatewise partial order.
    pub fn le(&self, other: &Degree) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a <= b)
    }

    /// Coordinatewise max, m v n.
    pub fn join(&self, other: &Degree) -> Degree {
        Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Degree) -> Degree {
        Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn plus_unit(&self, colour: Colour) -> Degree {
        let mut coords = self.coords.clone();
        coords[colour.index()] += 1;
        Degree { coords }
    }

    /// Coordinatewise subtraction; None unless other <= self.
    pub fn minus(&self, other: &Degree) -> Option<Degree> {
        if !other.le(self) {
            return None;
        }
        Some(Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn minus_unit(&self, colour: Colour) -> Option<Degree> {
        if self.coords[colour.index()] == 0 {
            return None;
        }
        let mut coords = self.coords.clone();
        coords[colour.index()] -= 1;
        Some(Degree { coords })
    }

    /// Number of lattice points in [0, self].
    pub fn box_size(&self) -> usize {
        self.coords
            .iter()
            .map(|&c| c as usize + 1)
            .product()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All lattice points n with lower <= n <= upper, in lexicographic order.
/// Empty when the interval is empty.
pub fn box_points(lower: &Degree, upper: &Degree) -> Vec<Degree> {
    if !lower.le(upper) {
        return Vec::new();
    }
    let k = lower.k();
    let mut out = Vec::new();
    let mut cur = lower.coords.clone();
    loop {
        out.push(Degree::from_coords(cur.clone()));
        // increment with carry, rightmost coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < upper.coords[i] {
                cur[i] += 1;
                cur[i + 1..k].copy_from_slice(&lower.coords[i + 1..k]);
                break;
            }
        }
    }
}

/// A word in the free monoid on the k colours.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ColourWord {
    letters: Vec<Colour>,
}

impl ColourWord {
    pub fn new(letters: Vec<Colour>) -> Self {
        ColourWord { letters }
    }

    pub fn empty() -> Self {
        ColourWord {
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Colour] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &ColourWord) -> ColourWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        ColourWord { letters }
    }

    /// Swaps the letters at positions j and j+1.
    pub fn swapped(&self, j: usize) -> ColourWord {
        let mut letters = self.letters.clone();
        letters.swap(j, j + 1);
        ColourWord { letters }
    }
}

impl fmt::Display for ColourWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "(empty)");
        }
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The quotient map q : F_k^+ -> N^k counting letters per colour.
pub fn abelianize(word: &ColourWord, k: usize) -> Result<Degree> {
    let mut coords = vec![0u32; k];
    for letter in word.letters() {
        if letter.index() >= k {
            return Err(Error::MalformedWord {
                letter: letter.one_based(),
                k,
            });
        }
        coords[letter.index()] += 1;
    }
    Ok(Degree::from_coords(coords))
}
