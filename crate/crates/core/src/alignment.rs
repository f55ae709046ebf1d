//! Directed word alignments, symmetrization heuristics and lexical
//! reordering orientation.
//!
//! Both directed alignments are expressed in the same `(source, target)`
//! coordinates. Files written by target-to-source aligners list `t-s`
//! pairs; pass `transpose = true` to [`parse_alignment_with`] for those.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlignmentError {
    #[error("malformed alignment pair {0:?}")]
    MalformedPair(String),
    #[error("alignment point {src}-{tgt} outside a {source_len}x{target_len} sentence pair")]
    OutOfRange { src: usize, tgt: usize, source_len: usize, target_len: usize },
    #[error("alignments cover different sentence lengths: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("phrase spans [{0},{1}] and [{2},{3}] overlap")]
    OverlappingSpans(usize, usize, usize, usize),
    #[error("span [{0},{1}] is reversed")]
    InvalidSpan(usize, usize),
    #[error("unknown symmetrization heuristic {0:?}")]
    UnknownHeuristic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlignmentPoint {
    pub source: usize,
    pub target: usize,
}

impl AlignmentPoint {
    pub fn new(source: usize, target: usize) -> Self {
        AlignmentPoint { source, target }
    }
}

impl fmt::Display for AlignmentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.source, self.target)
    }
}

/// A set of alignment points between a source and a target sentence. Points
/// are kept sorted row-major (by source, then target).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedAlignment {
    points: BTreeSet<AlignmentPoint>,
    source_len: usize,
    target_len: usize,
}

impl DirectedAlignment {
    pub fn new<I>(points: I, source_len: usize, target_len: usize) -> Result<Self, AlignmentError>
    where
        I: IntoIterator<Item = AlignmentPoint>,
    {
        let points: BTreeSet<_> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.source >= source_len || p.target >= target_len) {
            return Err(AlignmentError::OutOfRange { src: p.source, tgt: p.target, source_len, target_len });
        }
        Ok(DirectedAlignment { points, source_len, target_len })
    }

    pub fn from_pairs(pairs: &[(usize, usize)], source_len: usize, target_len: usize) -> Result<Self, AlignmentError> {
        Self::new(pairs.iter().map(|&(s, t)| AlignmentPoint::new(s, t)), source_len, target_len)
    }

    pub fn points(&self) -> &BTreeSet<AlignmentPoint> {
        &self.points
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.points.contains(&AlignmentPoint::new(source, target))
    }

    pub fn is_subset(&self, other: &DirectedAlignment) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn transposed(&self) -> DirectedAlignment {
        DirectedAlignment {
            points: self.points.iter().map(|p| AlignmentPoint::new(p.target, p.source)).collect(),
            source_len: self.target_len,
            target_len: self.source_len,
        }
    }

    /// Renders the points in the `s-t` interchange format.
    pub fn to_pharaoh(&self) -> String {
        self.points.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

pub fn parse_alignment(text: &str, source_len: usize, target_len: usize) -> Result<DirectedAlignment, AlignmentError> {
    parse_alignment_with(text, source_len, target_len, false)
}

/// Parses whitespace-separated `i-j` pairs. With `transpose`, each pair is
/// read as `target-source`. Lengths always refer to the source and target
/// sides of the result.
pub fn parse_alignment_with(
    text: &str,
    source_len: usize,
    target_len: usize,
    transpose: bool,
) -> Result<DirectedAlignment, AlignmentError> {
    let mut points = BTreeSet::new();
    for item in text.split_whitespace() {
        let (a, b) = parse_pair(item)?;
        let (s, t) = if transpose { (b, a) } else { (a, b) };
        if s >= source_len || t >= target_len {
            return Err(AlignmentError::MalformedPair(item.to_owned()));
        }
        points.insert(AlignmentPoint::new(s, t));
    }
    Ok(DirectedAlignment { points, source_len, target_len })
}

/// Parses a single `i-j` token.
pub fn parse_pair(item: &str) -> Result<(usize, usize), AlignmentError> {
    let malformed = || AlignmentError::MalformedPair(item.to_owned());
    let (a, b) = item.split_once('-').ok_or_else(malformed)?;
    let a = a.parse::<usize>().map_err(|_| malformed())?;
    let b = b.parse::<usize>().map_err(|_| malformed())?;
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetrizationHeuristic {
    Intersection,
    Union,
    Grow,
    GrowDiag,
    GrowDiagFinal,
    GrowDiagFinalAnd,
}

impl SymmetrizationHeuristic {
    pub const ALL: [SymmetrizationHeuristic; 6] = [
        SymmetrizationHeuristic::Intersection,
        SymmetrizationHeuristic::Grow,
        SymmetrizationHeuristic::GrowDiag,
        SymmetrizationHeuristic::GrowDiagFinalAnd,
        SymmetrizationHeuristic::GrowDiagFinal,
        SymmetrizationHeuristic::Union,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetrizationHeuristic::Intersection => "intersection",
            SymmetrizationHeuristic::Union => "union",
            SymmetrizationHeuristic::Grow => "grow",
            SymmetrizationHeuristic::GrowDiag => "grow-diag",
            SymmetrizationHeuristic::GrowDiagFinal => "grow-diag-final",
            SymmetrizationHeuristic::GrowDiagFinalAnd => "grow-diag-final-and",
        }
    }
}

impl FromStr for SymmetrizationHeuristic {
    type Err = AlignmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SymmetrizationHeuristic::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| AlignmentError::UnknownHeuristic(s.to_owned()))
    }
}

impl fmt::Display for SymmetrizationHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const NEIGHBORS_4: [(isize, isize); 4] = [(-1, 0), (0, -1), (1, 0), (0, 1)];
const DIAGONALS: [(isize, isize); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Mutable state of the growing alignment.
struct Grower<'a> {
    union: &'a BTreeSet<AlignmentPoint>,
    current: BTreeSet<AlignmentPoint>,
    source_aligned: Vec<bool>,
    target_aligned: Vec<bool>,
}

impl<'a> Grower<'a> {
    fn new(start: BTreeSet<AlignmentPoint>, union: &'a BTreeSet<AlignmentPoint>, source_len: usize, target_len: usize) -> Self {
        let mut g = Grower {
            union,
            current: BTreeSet::new(),
            source_aligned: vec![false; source_len],
            target_aligned: vec![false; target_len],
        };
        for p in start {
            g.add(p);
        }
        g
    }

    fn add(&mut self, p: AlignmentPoint) {
        self.source_aligned[p.source] = true;
        self.target_aligned[p.target] = true;
        self.current.insert(p);
    }

    fn touches(&self, p: AlignmentPoint, offsets: &[(isize, isize)]) -> bool {
        offsets.iter().any(|&(ds, dt)| {
            match (p.source.checked_add_signed(ds), p.target.checked_add_signed(dt)) {
                (Some(s), Some(t)) => self.current.contains(&AlignmentPoint::new(s, t)),
                _ => false,
            }
        })
    }

    fn either_unaligned(&self, p: AlignmentPoint) -> bool {
        !self.source_aligned[p.source] || !self.target_aligned[p.target]
    }

    fn both_unaligned(&self, p: AlignmentPoint) -> bool {
        !self.source_aligned[p.source] && !self.target_aligned[p.target]
    }

    /// First union point (row-major) adjacent through `offsets` whose source
    /// or target word is still unaligned.
    fn next_candidate(&self, offsets: &[(isize, isize)]) -> Option<AlignmentPoint> {
        self.union
            .iter()
            .copied()
            .find(|&p| !self.current.contains(&p) && self.either_unaligned(p) && self.touches(p, offsets))
    }

    /// Adds 4-neighbors to a fixpoint, scanning row-major.
    fn grow_rectilinear(&mut self) {
        while let Some(p) = self.next_candidate(&NEIGHBORS_4) {
            self.add(p);
        }
    }

    /// Diagonal growth. Rectilinear growth is always exhausted before a
    /// diagonal point is admitted, so the result contains the `Grow` result.
    fn grow_diagonal(&mut self) {
        loop {
            self.grow_rectilinear();
            match self.next_candidate(&DIAGONALS) {
                Some(p) => self.add(p),
                None => break,
            }
        }
    }

    fn final_pass(&mut self, fwd: &BTreeSet<AlignmentPoint>, rev: &BTreeSet<AlignmentPoint>, both: bool) {
        for &p in fwd.iter().chain(rev.iter()) {
            if self.current.contains(&p) {
                continue;
            }
            let eligible = if both { self.both_unaligned(p) } else { self.either_unaligned(p) };
            if eligible {
                self.add(p);
            }
        }
    }
}

/// Merges a source-to-target and a target-to-source alignment (both given
/// in source-target coordinates) into one alignment.
///
/// Growing starts from the intersection and adds union points adjacent to
/// the current alignment that cover at least one unaligned word. The final
/// passes scan forward points before reverse points; `GrowDiagFinal` runs the
/// both-unaligned pass of `GrowDiagFinalAnd` before its either-unaligned pass.
pub fn symmetrize(
    fwd: &DirectedAlignment,
    rev: &DirectedAlignment,
    heuristic: SymmetrizationHeuristic,
) -> Result<DirectedAlignment, AlignmentError> {
    if (fwd.source_len, fwd.target_len) != (rev.source_len, rev.target_len) {
        return Err(AlignmentError::DimensionMismatch((fwd.source_len, fwd.target_len), (rev.source_len, rev.target_len)));
    }
    let intersection: BTreeSet<_> = fwd.points.intersection(&rev.points).copied().collect();
    let union: BTreeSet<_> = fwd.points.union(&rev.points).copied().collect();

    let points = match heuristic {
        SymmetrizationHeuristic::Intersection => intersection,
        SymmetrizationHeuristic::Union => union,
        _ => {
            let mut g = Grower::new(intersection, &union, fwd.source_len, fwd.target_len);
            match heuristic {
                SymmetrizationHeuristic::Grow => g.grow_rectilinear(),
                SymmetrizationHeuristic::GrowDiag => g.grow_diagonal(),
                SymmetrizationHeuristic::GrowDiagFinalAnd => {
                    g.grow_diagonal();
                    g.final_pass(&fwd.points, &rev.points, true);
                }
                SymmetrizationHeuristic::GrowDiagFinal => {
                    g.grow_diagonal();
                    g.final_pass(&fwd.points, &rev.points, true);
                    g.final_pass(&fwd.points, &rev.points, false);
                }
                SymmetrizationHeuristic::Intersection | SymmetrizationHeuristic::Union => unreachable!(),
            }
            g.current
        }
    };
    Ok(DirectedAlignment { points, source_len: fwd.source_len, target_len: fwd.target_len })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Monotone,
    Swap,
    DiscontinuousLeft,
    DiscontinuousRight,
    /// Either discontinuous case, reported by the three-class scheme.
    Discontinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationScheme {
    /// monotone / swap / discontinuous
    Msd,
    /// monotone / swap / discontinuous-left / discontinuous-right
    Mslr,
}

/// Inclusive source-side span `[start, end]` of a phrase.
pub type Span = (usize, usize);

/// Orientation of the current phrase relative to the previous one, given the
/// source spans of two target-adjacent phrases.
pub fn classify_orientation(prev: Span, cur: Span, scheme: OrientationScheme) -> Result<Orientation, AlignmentError> {
    let ((s1, e1), (s2, e2)) = (prev, cur);
    for (s, e) in [prev, cur] {
        if s > e {
            return Err(AlignmentError::InvalidSpan(s, e));
        }
    }
    if s2 <= e1 && s1 <= e2 {
        return Err(AlignmentError::OverlappingSpans(s1, e1, s2, e2));
    }
    let orientation = if s2 == e1 + 1 {
        Orientation::Monotone
    } else if e2 + 1 == s1 {
        Orientation::Swap
    } else if s2 > e1 {
        Orientation::DiscontinuousRight
    } else {
        Orientation::DiscontinuousLeft
    };
    Ok(match (scheme, orientation) {
        (OrientationScheme::Msd, Orientation::DiscontinuousLeft | Orientation::DiscontinuousRight) => Orientation::Discontinuous,
        (_, o) => o,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use SymmetrizationHeuristic as H;

    fn al(pairs: &[(usize, usize)], s: usize, t: usize) -> DirectedAlignment {
        DirectedAlignment::from_pairs(pairs, s, t).unwrap()
    }

    #[test]
    fn parses_pharaoh_format() {
        let a = parse_alignment("0-0 1-1 1-1", 2, 2).unwrap();
        assert_eq!(a, al(&[(0, 0), (1, 1)], 2, 2));
        assert!(parse_alignment("", 2, 2).unwrap().is_empty());
        assert_eq!(parse_alignment("0-5", 1, 2), Err(AlignmentError::MalformedPair("0-5".into())));
        assert!(matches!(parse_alignment("0-x", 1, 2), Err(AlignmentError::MalformedPair(_))));
        assert!(matches!(parse_alignment("01", 1, 2), Err(AlignmentError::MalformedPair(_))));
        assert!(matches!(parse_alignment("-1-0", 1, 2), Err(AlignmentError::MalformedPair(_))));
        let t = parse_alignment_with("2-0 0-1", 2, 3, true).unwrap();
        assert_eq!(t, al(&[(0, 2), (1, 0)], 2, 3));
        assert_eq!(t.to_pharaoh(), "0-2 1-0");
    }

    #[test]
    fn identical_inputs_are_fixed_points() {
        let a = al(&[(0, 0), (1, 1)], 2, 2);
        for h in H::ALL {
            assert_eq!(symmetrize(&a, &a, h).unwrap(), a, "{h}");
        }
    }

    #[test]
    fn grow_diag_adds_diagonal_neighbor() {
        let fwd = al(&[(0, 0), (1, 1)], 2, 2);
        let rev = al(&[(0, 0)], 2, 2);
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiag).unwrap(), al(&[(0, 0), (1, 1)], 2, 2));
        assert_eq!(symmetrize(&fwd, &rev, H::Grow).unwrap(), al(&[(0, 0)], 2, 2));
    }

    #[test]
    fn growth_admits_neighbor_with_one_unaligned_word() {
        // (1,0) is a vertical neighbor of (0,0) and source word 1 is unaligned
        let fwd = al(&[(0, 0)], 2, 1);
        let rev = al(&[(0, 0), (1, 0)], 2, 1);
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiagFinalAnd).unwrap(), al(&[(0, 0), (1, 0)], 2, 1));
    }

    #[test]
    fn final_and_requires_both_words_unaligned() {
        // (2,0) is not adjacent to (0,0); its target word is already aligned
        let fwd = al(&[(0, 0)], 3, 1);
        let rev = al(&[(0, 0), (2, 0)], 3, 1);
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiag).unwrap(), al(&[(0, 0)], 3, 1));
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiagFinalAnd).unwrap(), al(&[(0, 0)], 3, 1));
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiagFinal).unwrap(), al(&[(0, 0), (2, 0)], 3, 1));
    }

    #[test]
    fn final_and_adds_isolated_points() {
        let fwd = al(&[(0, 0), (2, 2)], 3, 3);
        let rev = al(&[(0, 0)], 3, 3);
        assert_eq!(symmetrize(&fwd, &rev, H::GrowDiagFinalAnd).unwrap(), fwd);
    }

    #[test]
    fn rectilinear_growth_precedes_diagonal() {
        // scanning row-major, (1,1) precedes (1,2); admitting the diagonal
        // first would leave (1,2) with both words aligned
        let fwd = al(&[(0, 0), (2, 2), (1, 1)], 3, 3);
        let rev = al(&[(0, 0), (2, 2), (1, 2)], 3, 3);
        let grow = symmetrize(&fwd, &rev, H::Grow).unwrap();
        let diag = symmetrize(&fwd, &rev, H::GrowDiag).unwrap();
        assert_eq!(grow, al(&[(0, 0), (1, 1), (1, 2), (2, 2)], 3, 3));
        assert!(grow.is_subset(&diag));
    }

    #[test]
    fn dimension_mismatch() {
        let a = al(&[], 2, 2);
        let b = al(&[], 2, 3);
        assert!(matches!(symmetrize(&a, &b, H::Union), Err(AlignmentError::DimensionMismatch(..))));
    }

    #[test]
    fn heuristic_names_round_trip() {
        for h in H::ALL {
            assert_eq!(h.name().parse::<H>().unwrap(), h);
        }
        assert!("grow-dialog".parse::<H>().is_err());
    }

    #[test]
    fn orientation_cases() {
        use Orientation::*;
        use OrientationScheme::*;
        assert_eq!(classify_orientation((0, 1), (2, 3), Mslr), Ok(Monotone));
        assert_eq!(classify_orientation((2, 3), (0, 1), Mslr), Ok(Swap));
        assert_eq!(classify_orientation((0, 0), (3, 4), Mslr), Ok(DiscontinuousRight));
        assert_eq!(classify_orientation((3, 4), (0, 0), Mslr), Ok(DiscontinuousLeft));
        assert_eq!(classify_orientation((0, 0), (3, 4), Msd), Ok(Discontinuous));
        assert_eq!(classify_orientation((3, 4), (0, 0), Msd), Ok(Discontinuous));
        assert_eq!(classify_orientation((0, 2), (2, 3), Mslr), Err(AlignmentError::OverlappingSpans(0, 2, 2, 3)));
        assert_eq!(classify_orientation((2, 1), (4, 5), Mslr), Err(AlignmentError::InvalidSpan(2, 1)));
    }

    fn alignment_pair() -> impl Strategy<Value = (DirectedAlignment, DirectedAlignment)> {
        (1usize..7, 1usize..7).prop_flat_map(|(s, t)| {
            let pts = proptest::collection::btree_set((0..s, 0..t), 0..(s * t));
            (pts.clone(), pts).prop_map(move |(a, b)| {
                let to = |set: BTreeSet<(usize, usize)>| DirectedAlignment::new(set.into_iter().map(|(i, j)| AlignmentPoint::new(i, j)), s, t).unwrap();
                (to(a), to(b))
            })
        })
    }

    proptest! {
        #[test]
        fn heuristics_form_a_containment_chain((fwd, rev) in alignment_pair()) {
            let results: Vec<_> = H::ALL.iter().map(|&h| symmetrize(&fwd, &rev, h).unwrap()).collect();
            for w in results.windows(2) {
                prop_assert!(w[0].is_subset(&w[1]));
            }
        }

        #[test]
        fn symmetrize_is_deterministic((fwd, rev) in alignment_pair()) {
            for h in H::ALL {
                prop_assert_eq!(symmetrize(&fwd, &rev, h).unwrap(), symmetrize(&fwd, &rev, h).unwrap());
            }
        }

        #[test]
        fn orientation_is_total_on_disjoint_spans(a in 0usize..10, la in 0usize..3, b in 0usize..10, lb in 0usize..3) {
            let prev = (a, a + la);
            let cur = (b, b + lb);
            let overlap = cur.0 <= prev.1 && prev.0 <= cur.1;
            let r = classify_orientation(prev, cur, OrientationScheme::Mslr);
            prop_assert_eq!(r.is_err(), overlap);
        }
    }
}
