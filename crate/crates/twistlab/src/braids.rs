//! Braid words, their closures, and full-twist insertion.
//!
//! Letters are nonzero integers: letter `l` stands for the Artin generator
//! `sigma_{|l|}` acting on strand positions `|l|` and `|l| + 1` (1-based),
//! with the sign of `l` as the crossing sign of the closure diagram.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidBraid("need at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(Error::InvalidBraid("letter 0 is not a generator".into()));
            }
            let idx = l.unsigned_abs() as usize;
            if idx >= strands {
                return Err(Error::InvalidBraid(format!(
                    "letter {l} needs at least {} strands, word has {strands}",
                    idx + 1
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Grid size of the closure diagram built by `grid::braid_to_grid`:
    /// one row and column per strand plus one per letter.
    pub fn grid_size(&self) -> usize {
        (self.strands + self.letters.len()).max(2)
    }

    /// Underlying permutation of the braid, ignoring crossing signs:
    /// `perm[s]` is the 0-based final position of the strand entering at
    /// position `s`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos_to_strand: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            pos_to_strand.swap(i, i + 1);
        }
        let mut perm = vec![0usize; self.strands];
        for (slot, &s) in pos_to_strand.iter().enumerate() {
            perm[s] = slot;
        }
        perm
    }

    /// Number of link components of the braid closure: cycles of the
    /// underlying permutation.
    pub fn closure_component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                s = perm[s];
            }
        }
        cycles
    }

    pub fn is_knot(&self) -> bool {
        self.closure_component_count() == 1
    }
}

/// A band of `width` adjacent strands starting at 1-based position
/// `first_strand`, on which full twists are inserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistRegion {
    pub first_strand: usize,
    pub width: usize,
}

impl TwistRegion {
    pub fn new(first_strand: usize, width: usize) -> Self {
        TwistRegion { first_strand, width }
    }

    fn validate(&self) -> Result<()> {
        if self.first_strand == 0 {
            return Err(Error::InvalidRegion("strand positions are 1-based".into()));
        }
        if self.width < 2 {
            return Err(Error::InvalidRegion(format!(
                "a full twist needs at least 2 strands, region has width {}",
                self.width
            )));
        }
        Ok(())
    }

    /// The region must lie inside the word's strands:
    /// `first_strand + width - 1 <= strands`.
    pub fn fits(&self, word: &BraidWord) -> Result<()> {
        self.validate()?;
        if self.first_strand + self.width - 1 > word.strands() {
            return Err(Error::InvalidRegion(format!(
                "region [{}, {}] does not fit in {} strands",
                self.first_strand,
                self.first_strand + self.width - 1,
                word.strands()
            )));
        }
        Ok(())
    }
}

/// Letters of `m` full twists on the region: the braid
/// `((s_i s_{i+1} ... s_{i+w-2})^w)^m` where `i = first_strand` and
/// `w = width`. Length is `m * w * (w - 1)`.
pub fn full_twist_word(region: &TwistRegion, m: u32) -> Result<Vec<i32>> {
    region.validate()?;
    let i = region.first_strand as i32;
    let w = region.width;
    let run: Vec<i32> = (0..w - 1).map(|j| i + j as i32).collect();
    let mut letters = Vec::with_capacity(m as usize * w * (w - 1));
    for _ in 0..m {
        for _ in 0..w {
            letters.extend_from_slice(&run);
        }
    }
    Ok(letters)
}

/// Appends `m` full twists on `region` to `base`. The twist is a pure braid,
/// so the closure keeps its component count; the result must be a knot.
pub fn insert_twists(base: &BraidWord, region: &TwistRegion, m: u32) -> Result<BraidWord> {
    region.fits(base)?;
    let mut letters = base.letters().to_vec();
    letters.extend(full_twist_word(region, m)?);
    let word = BraidWord::new(base.strands(), letters)?;
    let components = word.closure_component_count();
    if components != 1 {
        return Err(Error::NotAKnot { components });
    }
    Ok(word)
}

// ---------------------------------------------------------------------------
// Built-in knots and knot files
// ---------------------------------------------------------------------------

pub struct CatalogKnot {
    pub name: &'static str,
    pub strands: usize,
    pub letters: &'static [i32],
    pub region: TwistRegion,
    pub summary: &'static str,
}

impl CatalogKnot {
    pub fn word(&self) -> BraidWord {
        BraidWord::new(self.strands, self.letters.to_vec()).expect("catalog words are valid")
    }
}

pub const CATALOG: &[CatalogKnot] = &[
    CatalogKnot {
        name: "unknot",
        strands: 2,
        letters: &[1],
        region: TwistRegion { first_strand: 1, width: 2 },
        summary: "unknot as a 2-strand closure; twisting gives T(2, 2m+1)",
    },
    CatalogKnot {
        name: "trefoil2",
        strands: 2,
        letters: &[1, 1, 1],
        region: TwistRegion { first_strand: 1, width: 2 },
        summary: "positive trefoil on 2 strands; twisting gives T(2, 2m+3)",
    },
    CatalogKnot {
        name: "trefoil3",
        strands: 3,
        letters: &[1, 2, 1, 2],
        region: TwistRegion { first_strand: 1, width: 3 },
        summary: "positive trefoil as T(3,2); twisting gives T(3, 3m+2)",
    },
    CatalogKnot {
        name: "figure8",
        strands: 3,
        letters: &[1, -2, 1, -2],
        region: TwistRegion { first_strand: 1, width: 3 },
        summary: "figure-eight knot on 3 strands",
    },
];

pub fn catalog_find(name: &str) -> Option<&'static CatalogKnot> {
    CATALOG.iter().find(|k| k.name == name)
}

/// On-disk knot description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnotSpec {
    pub name: String,
    pub strands: usize,
    pub letters: Vec<i32>,
    pub region: TwistRegion,
}

impl KnotSpec {
    pub fn word(&self) -> Result<BraidWord> {
        BraidWord::new(self.strands, self.letters.clone())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec: KnotSpec = serde_json::from_str(&text)?;
        spec.word()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_zero_letters_and_out_of_range_generators() {
        assert!(BraidWord::new(3, vec![1, 0, 2]).is_err());
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![-3]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
        assert!(BraidWord::new(3, vec![1, -2, 2]).is_ok());
    }

    #[test]
    fn component_counts() {
        let w = BraidWord::new(2, vec![1]).unwrap();
        assert_eq!(w.closure_component_count(), 1);
        let w = BraidWord::new(2, vec![]).unwrap();
        assert_eq!(w.closure_component_count(), 2);
        let w = BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
        assert_eq!(w.closure_component_count(), 1);
        // signs are irrelevant to the underlying permutation
        let w = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
        assert_eq!(w.closure_component_count(), 1);
        // full twist on 3 strands is pure: 3 components
        let w = BraidWord::new(3, vec![1, 2, 1, 2, 1, 2]).unwrap();
        assert_eq!(w.closure_component_count(), 3);
    }

    #[test]
    fn full_twist_letters() {
        let r = TwistRegion::new(1, 2);
        assert_eq!(full_twist_word(&r, 1).unwrap(), vec![1, 1]);
        assert_eq!(full_twist_word(&r, 0).unwrap(), Vec::<i32>::new());
        let r = TwistRegion::new(1, 3);
        assert_eq!(full_twist_word(&r, 1).unwrap(), vec![1, 2, 1, 2, 1, 2]);
        let r = TwistRegion::new(2, 3);
        assert_eq!(full_twist_word(&r, 1).unwrap(), vec![2, 3, 2, 3, 2, 3]);
    }

    #[test]
    fn width_one_region_is_rejected() {
        let r = TwistRegion::new(1, 1);
        assert!(matches!(full_twist_word(&r, 1), Err(Error::InvalidRegion(_))));
        let r = TwistRegion::new(0, 2);
        assert!(full_twist_word(&r, 1).is_err());
    }

    #[test]
    fn insert_twists_matches_worked_example() {
        let base = BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
        let r = TwistRegion::new(1, 3);
        let out = insert_twists(&base, &r, 1).unwrap();
        assert_eq!(out.letters(), &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]);
        assert_eq!(out.strands(), 3);
    }

    #[test]
    fn insert_twists_rejects_oversized_region() {
        let base = BraidWord::new(2, vec![1]).unwrap();
        let r = TwistRegion::new(2, 2);
        assert!(matches!(insert_twists(&base, &r, 1), Err(Error::InvalidRegion(_))));
    }

    #[test]
    fn insert_twists_rejects_links() {
        let base = BraidWord::new(2, vec![1, 1]).unwrap();
        let r = TwistRegion::new(1, 2);
        assert!(matches!(
            insert_twists(&base, &r, 1),
            Err(Error::NotAKnot { components: 2 })
        ));
    }

    #[test]
    fn catalog_words_are_knots() {
        for k in CATALOG {
            let w = k.word();
            assert!(w.is_knot(), "{} should close to a knot", k.name);
            assert!(k.region.fits(&w).is_ok());
        }
        assert!(catalog_find("trefoil2").is_some());
        assert!(catalog_find("nope").is_none());
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (2usize..=5).prop_flat_map(|strands| {
            let letter = (1i32..strands as i32).prop_flat_map(|g| {
                prop_oneof![Just(g), Just(-g)]
            });
            proptest::collection::vec(letter, 0..12)
                .prop_map(move |letters| BraidWord::new(strands, letters).unwrap())
        })
    }

    proptest! {
        // m twists then p twists is the same word as m + p twists
        #[test]
        fn twist_insertion_is_additive(word in arb_word(), a in 0u32..3, b in 0u32..3) {
            let region = TwistRegion::new(1, word.strands());
            let both = {
                let mut letters = word.letters().to_vec();
                letters.extend(full_twist_word(&region, a).unwrap());
                letters.extend(full_twist_word(&region, b).unwrap());
                BraidWord::new(word.strands(), letters).unwrap()
            };
            let at_once = {
                let mut letters = word.letters().to_vec();
                letters.extend(full_twist_word(&region, a + b).unwrap());
                BraidWord::new(word.strands(), letters).unwrap()
            };
            prop_assert_eq!(both, at_once);
        }

        // full twists are pure braids: component count never changes
        #[test]
        fn twists_preserve_component_count(word in arb_word(), m in 0u32..3) {
            let region = TwistRegion::new(1, word.strands());
            let mut letters = word.letters().to_vec();
            letters.extend(full_twist_word(&region, m).unwrap());
            let twisted = BraidWord::new(word.strands(), letters).unwrap();
            prop_assert_eq!(
                twisted.closure_component_count(),
                word.closure_component_count()
            );
        }

        #[test]
        fn twist_length_formula(first in 1usize..3, width in 2usize..5, m in 0u32..4) {
            let region = TwistRegion::new(first, width);
            let letters = full_twist_word(&region, m).unwrap();
            prop_assert_eq!(letters.len(), m as usize * width * (width - 1));
        }
    }
}
