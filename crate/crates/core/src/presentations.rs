//! Graded presentations: the Fomin-Kirillov quadratic relations and a
//! versioned JSON file format for arbitrary homogeneous presentations.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncpoly::{NCPolynomial, PolyError, Word};
use crate::scalar::{Rational, Scalar, ScalarError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("n must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("inhomogeneous relation {0}")]
    Inhomogeneous(usize),
    #[error("zero relation {0}")]
    ZeroRelation(usize),
    #[error("duplicate relation {0}")]
    DuplicateRelation(usize),
    #[error("unknown generator label {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateGenerator(String),
    #[error("{generators} generators but {degrees} degrees")]
    DegreeCount { generators: usize, degrees: usize },
    #[error("generator degrees must be positive")]
    NonPositiveDegree,
    #[error("too many generators ({0})")]
    TooManyGenerators(usize),
    #[error("relation {0} has non-rational coefficients")]
    NonRational(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A transposition `(i j)` of `{1..n}` in canonical form `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transposition {
    i: u16,
    j: u16,
}

impl Transposition {
    /// Canonicalizes the pair; `None` if `a == b` or either is 0.
    pub fn new(a: usize, b: usize) -> Option<Self> {
        if a == b || a == 0 || b == 0 {
            return None;
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        Some(Transposition {
            i: i as u16,
            j: j as u16,
        })
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    /// Image of the point `x` under this transposition.
    pub fn apply(self, x: usize) -> usize {
        if x == self.i() {
            self.j()
        } else if x == self.j() {
            self.i()
        } else {
            x
        }
    }

    pub fn is_disjoint(self, other: Transposition) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }

    /// All `C(n,2)` transpositions sorted by `(i, j)`.
    pub fn all(n: usize) -> Vec<Transposition> {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                v.push(Transposition {
                    i: i as u16,
                    j: j as u16,
                });
            }
        }
        v
    }

    fn parse_label(s: &str) -> Option<Self> {
        let inner = s.strip_prefix("x(")?.strip_suffix(')')?;
        let (a, b) = inner.split_once(',')?;
        let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        (a < b).then(|| Transposition::new(a, b)).flatten()
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GeneratorLabel {
    Transposition(Transposition),
    Named(String),
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Transposition(t) => write!(f, "x({},{})", t.i, t.j),
            GeneratorLabel::Named(s) => write!(f, "{}", s),
        }
    }
}

/// A finitely presented graded algebra `k<generators> / (relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    generators: Vec<GeneratorLabel>,
    degrees: Vec<u32>,
    relations: Vec<NCPolynomial>,
}

impl Presentation {
    /// Validates and builds a presentation. `n` is 0 for generic inputs.
    pub fn new(
        n: usize,
        generators: Vec<GeneratorLabel>,
        degrees: Vec<u32>,
        relations: Vec<NCPolynomial>,
    ) -> Result<Self, PresentationError> {
        if generators.len() != degrees.len() {
            return Err(PresentationError::DegreeCount {
                generators: generators.len(),
                degrees: degrees.len(),
            });
        }
        if generators.len() > u16::MAX as usize {
            return Err(PresentationError::TooManyGenerators(generators.len()));
        }
        if degrees.contains(&0) {
            return Err(PresentationError::NonPositiveDegree);
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(PresentationError::DuplicateGenerator(g.to_string()));
            }
        }
        let mut seen_rel = HashSet::new();
        for (idx, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(PresentationError::ZeroRelation(idx));
            }
            if r.terms().any(|(_, c)| c.as_rational().is_none()) {
                return Err(PresentationError::NonRational(idx));
            }
            if let Some((w, _)) = r
                .terms()
                .find(|(w, _)| w.iter().any(|g| g.index() >= generators.len()))
            {
                return Err(PresentationError::UnknownGenerator(format!("{:?}", w)));
            }
            if r.weighted_homogeneous_degree(&degrees).is_none() {
                return Err(PresentationError::Inhomogeneous(idx));
            }
            if !seen_rel.insert(format!("{:?}", r)) {
                return Err(PresentationError::DuplicateRelation(idx));
            }
        }
        Ok(Presentation {
            n,
            generators,
            degrees,
            relations,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[GeneratorLabel] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn relations(&self) -> &[NCPolynomial] {
        &self.relations
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations
            .iter()
            .filter_map(|r| r.weighted_homogeneous_degree(&self.degrees))
            .max()
            .unwrap_or(0)
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.to_string() == label)
    }

    pub fn to_json(&self) -> String {
        let file = PresentationFile {
            version: FORMAT_VERSION,
            n: (self.n > 0).then_some(self.n),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            degrees: self.degrees.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms()
                        .rev()
                        .map(|(w, c)| TermRecord {
                            coeff: c.to_string(),
                            word: w
                                .iter()
                                .map(|g| self.generators[g.index()].to_string())
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("presentation serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| PresentationError::Parse(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(PresentationError::Version(file.version));
        }
        let n = file.n.unwrap_or(0);
        let generators: Vec<GeneratorLabel> = file
            .generators
            .iter()
            .map(|s| match Transposition::parse_label(s) {
                Some(t) if n > 0 && t.j() <= n => GeneratorLabel::Transposition(t),
                _ => GeneratorLabel::Named(s.clone()),
            })
            .collect();
        let index: HashMap<&str, usize> = file
            .generators
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut relations = Vec::with_capacity(file.relations.len());
        for terms in &file.relations {
            let mut p = NCPolynomial::zero();
            for t in terms {
                let c: Rational = t.coeff.parse()?;
                let mut letters = Vec::with_capacity(t.word.len());
                for g in &t.word {
                    letters.push(
                        *index
                            .get(g.as_str())
                            .ok_or_else(|| PresentationError::UnknownGenerator(g.clone()))?,
                    );
                }
                p.add_term(Word::from_indices(letters), &Scalar::Rational(c))?;
            }
            relations.push(p);
        }
        Presentation::new(n, generators, file.degrees, relations)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PresentationError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    generators: Vec<String>,
    degrees: Vec<u32>,
    relations: Vec<Vec<TermRecord>>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: String,
    word: Vec<String>,
}

pub fn load_presentation(path: impl AsRef<Path>) -> Result<Presentation, PresentationError> {
    Presentation::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_presentation(
    p: &Presentation,
    path: impl AsRef<Path>,
) -> Result<(), PresentationError> {
    p.save(path)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(squares, triple relations, disjoint commutators)` of the FK presentation.
pub fn relation_count(n: usize) -> Result<(usize, usize, usize), PresentationError> {
    if n < 3 {
        return Err(PresentationError::TooSmall(n));
    }
    Ok((binomial(n, 2), 2 * binomial(n, 3), 3 * binomial(n, 4)))
}

/// The Fomin-Kirillov presentation of `E_n`.
///
/// Generators `x(i,j)` for `i < j` in lexicographic order. Relations, each
/// moved to one side, in this order: all squares; for each triple `i<j<k`
/// the two three-term relations; one commutator per unordered pair of
/// disjoint transpositions.
pub fn fk_presentation(n: usize) -> Result<Presentation, PresentationError> {
    if n < 3 {
        return Err(PresentationError::TooSmall(n));
    }
    let basis = Transposition::all(n);
    let idx: HashMap<Transposition, usize> =
        basis.iter().enumerate().map(|(a, &t)| (t, a)).collect();
    let x = |i: usize, j: usize| idx[&Transposition::new(i, j).unwrap()];
    let term = |c: i64, a: usize, b: usize| (Scalar::from(c), Word::from_indices([a, b]));

    let mut relations = Vec::new();
    for a in 0..basis.len() {
        relations.push(NCPolynomial::from_terms([term(1, a, a)])?);
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let (ij, jk, ik) = (x(i, j), x(j, k), x(i, k));
                relations.push(NCPolynomial::from_terms([
                    term(1, ij, jk),
                    term(-1, jk, ik),
                    term(-1, ik, ij),
                ])?);
                relations.push(NCPolynomial::from_terms([
                    term(1, jk, ij),
                    term(-1, ik, jk),
                    term(-1, ij, ik),
                ])?);
            }
        }
    }
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            if basis[a].is_disjoint(basis[b]) {
                relations.push(NCPolynomial::from_terms([term(1, a, b), term(-1, b, a)])?);
            }
        }
    }
    let generators = basis
        .into_iter()
        .map(GeneratorLabel::Transposition)
        .collect::<Vec<_>>();
    let degrees = vec![1; generators.len()];
    Presentation::new(n, generators, degrees, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank_dense, RationalField};

    #[test]
    fn fk_sizes() {
        for (n, gens, rels) in [(3, 3, 5), (4, 6, 17), (5, 10, 45)] {
            let p = fk_presentation(n).unwrap();
            assert_eq!(p.num_generators(), gens);
            assert_eq!(p.relations().len(), rels);
        }
        assert!(matches!(
            fk_presentation(2),
            Err(PresentationError::TooSmall(2))
        ));
    }

    #[test]
    fn relation_counts() {
        assert_eq!(relation_count(3).unwrap(), (3, 2, 0));
        assert_eq!(relation_count(4).unwrap(), (6, 8, 3));
        assert_eq!(relation_count(6).unwrap(), (15, 40, 45));
        assert!(relation_count(2).is_err());
        for n in 3..=6 {
            let (a, b, c) = relation_count(n).unwrap();
            let p = fk_presentation(n).unwrap();
            assert_eq!(p.relations().len(), a + b + c);
            assert!(p
                .relations()
                .iter()
                .all(|r| r.homogeneous_degree() == Some(2)));
        }
    }

    #[test]
    fn fk_relations_are_independent() {
        for n in 3..=5 {
            let p = fk_presentation(n).unwrap();
            let m = p.num_generators();
            let rows: Vec<Vec<Rational>> = p
                .relations()
                .iter()
                .map(|r| {
                    let mut v = vec![Rational::zero(); m * m];
                    for (w, c) in r.terms() {
                        v[w[0].index() * m + w[1].index()] = c.as_rational().unwrap().clone();
                    }
                    v
                })
                .collect();
            assert_eq!(rank_dense(&RationalField, rows), p.relations().len());
        }
    }

    #[test]
    fn triple_relation_shape() {
        let p = fk_presentation(3).unwrap();
        // x(1,2)x(2,3) - x(2,3)x(1,3) - x(1,3)x(1,2); generators (12)=0, (13)=1, (23)=2
        let r = &p.relations()[3];
        assert_eq!(
            r.coefficient(&Word::from_indices([0, 2])),
            Some(&Scalar::from(1))
        );
        assert_eq!(
            r.coefficient(&Word::from_indices([2, 1])),
            Some(&Scalar::from(-1))
        );
        assert_eq!(
            r.coefficient(&Word::from_indices([1, 0])),
            Some(&Scalar::from(-1))
        );
    }

    #[test]
    fn round_trip_fk3() {
        let p = fk_presentation(3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fk3.json");
        save_presentation(&p, &path).unwrap();
        let q = load_presentation(&path).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_json(), q.to_json());
    }

    #[test]
    fn load_commutative_pair() {
        let text = r#"{"version":1,"generators":["a","b"],"degrees":[1,1],
            "relations":[[{"coeff":"1","word":["a","b"]},{"coeff":"-1","word":["b","a"]}]]}"#;
        let p = Presentation::from_json(text).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.n(), 0);
        assert_eq!(p.generators()[0], GeneratorLabel::Named("a".into()));
    }

    #[test]
    fn load_errors() {
        let inhom = r#"{"version":1,"generators":["a"],"degrees":[1],
            "relations":[[{"coeff":"1","word":["a","a"]},{"coeff":"-1","word":["a"]}]]}"#;
        let e = Presentation::from_json(inhom).unwrap_err();
        assert_eq!(e.to_string(), "inhomogeneous relation 0");
        let unknown = r#"{"version":1,"generators":["a"],"degrees":[1],
            "relations":[[{"coeff":"1","word":["a","c"]}]]}"#;
        assert!(
            matches!(Presentation::from_json(unknown), Err(PresentationError::UnknownGenerator(g)) if g == "c")
        );
        assert!(matches!(
            Presentation::from_json("{"),
            Err(PresentationError::Parse(_))
        ));
        let version = r#"{"version":9,"generators":[],"degrees":[],"relations":[]}"#;
        assert!(matches!(
            Presentation::from_json(version),
            Err(PresentationError::Version(9))
        ));
        let dup = r#"{"version":1,"generators":["a"],"degrees":[1],
            "relations":[[{"coeff":"1","word":["a","a"]}],[{"coeff":"1","word":["a","a"]}]]}"#;
        assert!(matches!(
            Presentation::from_json(dup),
            Err(PresentationError::DuplicateRelation(1))
        ));
        let badcoeff = r#"{"version":1,"generators":["a"],"degrees":[1],
            "relations":[[{"coeff":"1/0","word":["a","a"]}]]}"#;
        assert!(matches!(
            Presentation::from_json(badcoeff),
            Err(PresentationError::Scalar(_))
        ));
    }

    #[test]
    fn weighted_homogeneity_accepted() {
        let text = r#"{"version":1,"generators":["a","b"],"degrees":[2,1],
            "relations":[[{"coeff":"1","word":["a"]},{"coeff":"-1/2","word":["b","b"]}]]}"#;
        let p = Presentation::from_json(text).unwrap();
        assert_eq!(p.max_relation_degree(), 2);
    }
}
