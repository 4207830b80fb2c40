use std::fmt;

use crate::power_circuit::PcError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A partial map from nodes to signs in {-1, +1}.
///
/// Terms are kept sorted by node id, so two markings with the same support
/// and signs compare equal structurally.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Marking {
    terms: Vec<(NodeId, i8)>,
}

impl Marking {
    pub fn empty() -> Self {
        Marking { terms: Vec::new() }
    }

    pub fn single(node: NodeId, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "marking signs are +1 or -1");
        Marking { terms: vec![(node, sign)] }
    }

    /// Builds a marking from arbitrary terms. Zero signs are dropped.
    pub fn new(terms: impl IntoIterator<Item = (NodeId, i8)>) -> Result<Self, PcError> {
        let mut terms: Vec<(NodeId, i8)> = terms.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_unstable_by_key(|t| t.0);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(PcError::DuplicateTerm { node: w[0].0 });
            }
        }
        if let Some(&(node, sign)) = terms.iter().find(|t| t.1.abs() != 1) {
            return Err(PcError::BadSign { node, sign });
        }
        Ok(Marking { terms })
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(NodeId, i8)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 == 1 || t.1 == -1));
        Marking { terms }
    }

    pub fn terms(&self) -> &[(NodeId, i8)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, node: NodeId) -> i8 {
        match self.terms.binary_search_by_key(&node, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn negated(&self) -> Marking {
        Marking {
            terms: self.terms.iter().map(|&(n, s)| (n, -s)).collect(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.terms.iter().map(|t| t.0)
    }
}
