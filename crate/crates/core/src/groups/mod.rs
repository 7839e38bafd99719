//! Marked groups: a rank `r`, a computable backend group, and images of the
//! `r` free generators. The kernel of the evaluation map is the normal
//! subgroup whose cogrowth we count.

mod presets;
mod spec;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

pub use presets::{preset, preset_names, preset_spec, PRESETS};
pub use spec::{BackendSpec, GroupSpec, ImageSpec};

use crate::error::GroupError;
use crate::freewords::{Letter, MIN_RANK};

/// Canonical value of a backend element. Equality is equality of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Row index into a multiplication table.
    Table(u32),
    /// Images of `0..degree`.
    Perm(Box<[u32]>),
    /// Row-major entries, reduced into `[0, m)` when a modulus is set.
    Matrix(Box<[i64]>),
    Vector(Box<[i64]>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Table(i) => write!(f, "#{i}"),
            Element::Perm(p) => write!(f, "{p:?}"),
            Element::Matrix(m) => write!(f, "{m:?}"),
            Element::Vector(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    FiniteTable { order: usize, identity: u32, table: Vec<u32> },
    Permutation { degree: usize },
    IntegerMatrix { dimension: usize, modulus: Option<i64> },
    FreeAbelian { dimension: usize },
}

impl Backend {
    pub fn kind(&self) -> &'static str {
        match self {
            Backend::FiniteTable { .. } => "finite_table",
            Backend::Permutation { .. } => "permutation",
            Backend::IntegerMatrix { .. } => "integer_matrix",
            Backend::FreeAbelian { .. } => "free_abelian",
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Backend::FiniteTable { .. } | Backend::Permutation { .. } => true,
            Backend::IntegerMatrix { modulus, .. } => modulus.is_some(),
            Backend::FreeAbelian { .. } => false,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Backend::FiniteTable { identity, .. } => Element::Table(*identity),
            Backend::Permutation { degree } => Element::Perm((0..*degree as u32).collect()),
            Backend::IntegerMatrix { dimension, .. } => {
                let n = *dimension;
                Element::Matrix((0..n * n).map(|k| i64::from(k / n == k % n)).collect())
            }
            Backend::FreeAbelian { dimension } => Element::Vector(vec![0; *dimension].into()),
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        match (self, a, b) {
            (Backend::FiniteTable { order, table, .. }, Element::Table(x), Element::Table(y)) => {
                Ok(Element::Table(table[*x as usize * order + *y as usize]))
            }
            // right action: apply `a` first, then `b`
            (Backend::Permutation { .. }, Element::Perm(x), Element::Perm(y)) => {
                Ok(Element::Perm(x.iter().map(|&i| y[i as usize]).collect()))
            }
            (Backend::IntegerMatrix { dimension, modulus }, Element::Matrix(x), Element::Matrix(y)) => {
                let n = *dimension;
                let mut out = vec![0i64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc: i128 = 0;
                        for k in 0..n {
                            acc += i128::from(x[i * n + k]) * i128::from(y[k * n + j]);
                        }
                        if let Some(m) = modulus {
                            acc = acc.rem_euclid(i128::from(*m));
                        }
                        out[i * n + j] =
                            i64::try_from(acc).map_err(|_| GroupError::Overflow("integer_matrix"))?;
                    }
                }
                Ok(Element::Matrix(out.into()))
            }
            (Backend::FreeAbelian { .. }, Element::Vector(x), Element::Vector(y)) => x
                .iter()
                .zip(y.iter())
                .map(|(a, b)| a.checked_add(*b).ok_or(GroupError::Overflow("free_abelian")))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| Element::Vector(v.into())),
            _ => panic!("element does not belong to a {} backend", self.kind()),
        }
    }
}

/// A group with `rank` distinguished generators, given by their images.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    name: String,
    rank: usize,
    backend: Backend,
    identity: Element,
    /// Image of each letter, indexed by letter code.
    letter_images: Vec<Element>,
    even_parity: bool,
}

impl MarkedGroup {
    /// Builds a marked group from generator images and checks that every image
    /// is invertible in the backend.
    pub fn new(
        name: impl Into<String>,
        backend: Backend,
        images: Vec<Element>,
    ) -> Result<MarkedGroup, GroupError> {
        let rank = images.len();
        if rank < MIN_RANK {
            return Err(crate::error::WordError::RankTooSmall(rank).into());
        }
        let identity = backend.identity();
        let mut letter_images = Vec::with_capacity(2 * rank);
        for (i, img) in images.into_iter().enumerate() {
            let inv = invert(&backend, &img).ok_or(GroupError::NotInvertible(i + 1))?;
            letter_images.push(img);
            letter_images.push(inv);
        }
        Ok(MarkedGroup { name: name.into(), rank, backend, identity, letter_images, even_parity: false })
    }

    /// Declares that every kernel word has even length (used by parity checks).
    pub fn with_even_parity(mut self, even: bool) -> MarkedGroup {
        self.even_parity = even;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `q = 2r - 1`.
    pub fn q(&self) -> usize {
        2 * self.rank - 1
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_finite(&self) -> bool {
        self.backend.is_finite()
    }

    pub fn even_parity(&self) -> bool {
        self.even_parity
    }

    pub fn identity(&self) -> &Element {
        &self.identity
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity
    }

    pub fn letter_count(&self) -> usize {
        self.letter_images.len()
    }

    pub fn letter_image(&self, code: usize) -> &Element {
        &self.letter_images[code]
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.backend.multiply(a, b)
    }

    /// Right multiplication by a letter.
    #[inline]
    pub fn step(&self, x: &Element, code: usize) -> Result<Element, GroupError> {
        self.backend.multiply(x, &self.letter_images[code])
    }

    /// Image of a (not necessarily reduced) word.
    pub fn evaluate(&self, letters: &[Letter]) -> Result<Element, GroupError> {
        let mut acc = self.identity.clone();
        for l in letters {
            if !l.valid_for(self.rank) {
                return Err(GroupError::InvalidLetter { index: l.index(), rank: self.rank });
            }
            acc = self.step(&acc, l.code())?;
        }
        Ok(acc)
    }

    /// Elements reachable by words of length at most `radius`, sorted.
    pub fn ball(&self, radius: usize, budget: usize) -> Result<Vec<Element>, GroupError> {
        let mut seen: HashSet<Element> = HashSet::new();
        seen.insert(self.identity.clone());
        let mut frontier = vec![self.identity.clone()];
        for r in 1..=radius {
            let mut next = Vec::new();
            for x in &frontier {
                for code in 0..self.letter_count() {
                    let y = self.step(x, code)?;
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if seen.len() > budget {
                return Err(GroupError::BallBudgetExceeded { radius: r, budget });
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut out: Vec<Element> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// All elements of the subgroup generated by the images, sorted with the
    /// identity first. Only for finite backends.
    pub fn elements(&self, budget: usize) -> Result<Vec<Element>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::NotFinite(self.name.clone()));
        }
        let all = self.ball(usize::MAX, budget)?;
        let mut rest: BTreeSet<Element> = all.into_iter().collect();
        rest.remove(&self.identity);
        let mut out = vec![self.identity.clone()];
        out.extend(rest);
        Ok(out)
    }
}

fn invert(backend: &Backend, x: &Element) -> Option<Element> {
    match (backend, x) {
        (Backend::FiniteTable { order, identity, table }, Element::Table(i)) => (0..*order)
            .find(|&j| table[*i as usize * order + j] == *identity)
            .map(|j| Element::Table(j as u32)),
        (Backend::Permutation { .. }, Element::Perm(p)) => {
            let mut inv = vec![0u32; p.len()];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi as usize] = i as u32;
            }
            Some(Element::Perm(inv.into()))
        }
        (Backend::IntegerMatrix { dimension, modulus }, Element::Matrix(m)) => {
            crate::linalg::integer_matrix_inverse(*dimension, m, *modulus)
                .map(|v| Element::Matrix(v.into()))
        }
        (Backend::FreeAbelian { .. }, Element::Vector(v)) => {
            v.iter().map(|a| a.checked_neg()).collect::<Option<Vec<_>>>().map(|v| Element::Vector(v.into()))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::{parse_word, reduce};
    use proptest::prelude::*;

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let z2 = preset("zsquared").unwrap();
        assert_eq!(z2.evaluate(&w("abAB")).unwrap(), Element::Vector(vec![0, 0].into()));
        assert!(!z2.is_identity(&z2.evaluate(&w("a")).unwrap()));
        assert_eq!(z2.evaluate(&w("a")).unwrap(), Element::Vector(vec![1, 0].into()));

        let klein = preset("z2xz2").unwrap();
        assert!(klein.is_identity(&klein.evaluate(&w("aa")).unwrap()));
        assert!(klein.is_identity(&klein.evaluate(&w("abab")).unwrap()));

        let sl2 = preset("sl2z").unwrap();
        assert_eq!(sl2.evaluate(&w("ab")).unwrap(), Element::Matrix(vec![2, 1, 1, 1].into()));
        assert!(sl2.is_identity(&sl2.evaluate(&[]).unwrap()));
        // a b⁻¹ a = b⁻¹ a b⁻¹ in SL(2, Z)
        assert!(sl2.is_identity(&sl2.evaluate(&w("aBabAb")).unwrap()));
    }

    #[test]
    fn invalid_letter_rejected() {
        let g = preset("trivial").unwrap();
        assert_eq!(
            g.evaluate(&w("c")),
            Err(GroupError::InvalidLetter { index: 3, rank: 2 })
        );
    }

    #[test]
    fn balls() {
        for name in preset_names() {
            let g = preset(name).unwrap();
            assert_eq!(g.ball(0, 10).unwrap(), vec![g.identity().clone()]);
        }
        assert_eq!(preset("zsquared").unwrap().ball(1, 100).unwrap().len(), 5);
        assert_eq!(preset("zsquared").unwrap().ball(3, 100).unwrap().len(), 25);
        assert_eq!(preset("z2xz2").unwrap().ball(2, 100).unwrap().len(), 4);
        assert_eq!(preset("s3").unwrap().ball(10, 100).unwrap().len(), 6);
        assert!(matches!(
            preset("sl2z").unwrap().ball(12, 1000),
            Err(GroupError::BallBudgetExceeded { .. })
        ));
    }

    #[test]
    fn balls_are_nested() {
        for name in preset_names() {
            let g = preset(name).unwrap();
            for n in 0..5 {
                let small: HashSet<_> = g.ball(n, 1 << 20).unwrap().into_iter().collect();
                let big: HashSet<_> = g.ball(n + 1, 1 << 20).unwrap().into_iter().collect();
                assert!(small.is_subset(&big));
            }
        }
    }

    #[test]
    fn finite_elements() {
        assert_eq!(preset("trivial").unwrap().elements(100).unwrap().len(), 1);
        assert_eq!(preset("z2xz2").unwrap().elements(100).unwrap().len(), 4);
        let s3 = preset("s3").unwrap();
        let els = s3.elements(100).unwrap();
        assert_eq!(els.len(), 6);
        assert_eq!(&els[0], s3.identity());
        assert!(matches!(preset("zsquared").unwrap().elements(100), Err(GroupError::NotFinite(_))));
    }

    #[test]
    fn modular_matrix_is_finite() {
        let spec = r#"{"name": "sl2_mod3", "rank": 2,
            "backend": {"type": "integer_matrix", "dimension": 2, "modulus": 3},
            "images": [[1,1,0,1],[1,0,1,1]]}"#;
        let g = GroupSpec::from_json(spec).unwrap().build().unwrap();
        assert!(g.is_finite());
        assert_eq!(g.elements(1000).unwrap().len(), 24);
    }

    fn letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(0..4usize, 0..max_len)
            .prop_map(|codes| codes.into_iter().map(Letter::from_code).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn evaluation_is_a_homomorphism(u in letters(16), v in letters(16), which in 0..5usize) {
            let g = preset(preset_names()[which]).unwrap();
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let lhs = g.evaluate(&uv).unwrap();
            let rhs = g.multiply(&g.evaluate(&u).unwrap(), &g.evaluate(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_ignores_free_reduction(u in letters(24), which in 0..5usize) {
            let g = preset(preset_names()[which]).unwrap();
            let r = reduce(&u);
            prop_assert_eq!(g.evaluate(&u).unwrap(), g.evaluate(r.letters()).unwrap());
        }
    }
}
