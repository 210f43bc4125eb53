use std::collections::BTreeMap;

use crate::field::Field;

/// Finite linear combination of keys with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord, F> {
    terms: BTreeMap<K, F>,
}

impl<K: Ord, F> Default for LinComb<K, F> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone, F: Field> LinComb<K, F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: F) -> Self {
        let mut l = Self::new();
        l.add_term(k, c);
        l
    }

    pub fn add_term(&mut self, k: K, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &F, other: &Self) {
        for (k, x) in &other.terms {
            self.add_term(k.clone(), c.clone() * x.clone());
        }
    }

    pub fn scaled(&self, c: &F) -> Self {
        let mut out = Self::new();
        out.add_scaled(c, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&F> {
        self.terms.get(k)
    }

    pub fn into_terms(self) -> BTreeMap<K, F> {
        self.terms
    }
}

impl<K: Ord + Clone, F: Field> FromIterator<(K, F)> for LinComb<K, F> {
    fn from_iter<I: IntoIterator<Item = (K, F)>>(iter: I) -> Self {
        let mut l = Self::new();
        for (k, c) in iter {
            l.add_term(k, c);
        }
        l
    }
}
