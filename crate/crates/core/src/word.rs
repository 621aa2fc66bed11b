//! Words over the stateset and over the alphabet, plus the packed keys used
//! inside orbit searches.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

macro_rules! index_word {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub Vec<usize>);

        impl $name {
            pub fn new(symbols: Vec<usize>) -> Self {
                Self(symbols)
            }

            pub fn empty() -> Self {
                Self(Vec::new())
            }

            pub fn as_slice(&self) -> &[usize] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<usize> {
                self.0
            }

            /// Concatenation `self · other`.
            pub fn concat(&self, other: &[usize]) -> Self {
                let mut v = Vec::with_capacity(self.0.len() + other.len());
                v.extend_from_slice(&self.0);
                v.extend_from_slice(other);
                Self(v)
            }

            /// `self` repeated `n` times.
            pub fn pow(&self, n: usize) -> Self {
                Self(self.0.repeat(n))
            }

            pub fn prefix(&self, len: usize) -> Self {
                Self(self.0[..len].to_vec())
            }

            pub fn suffix(&self, len: usize) -> Self {
                Self(self.0[self.0.len() - len..].to_vec())
            }
        }

        impl Deref for $name {
            type Target = [usize];
            fn deref(&self) -> &[usize] {
                &self.0
            }
        }

        impl From<Vec<usize>> for $name {
            fn from(v: Vec<usize>) -> Self {
                Self(v)
            }
        }

        impl From<&[usize]> for $name {
            fn from(v: &[usize]) -> Self {
                Self(v.to_vec())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
                write!(f, "[{}]", parts.join(" "))
            }
        }
    };
}

index_word!(
    /// A word over the stateset `Q`, stored as state indices.
    StateWord
);
index_word!(
    /// A word over the alphabet `Σ`, stored as letter indices.
    LetterWord
);

/// Hashable, ordered key for a word of fixed length inside one search.
///
/// Words whose base-`k` value fits in 128 bits are packed (first symbol most
/// significant, so the integer order is the lexicographic order); longer
/// words fall back to a boxed slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum WordKey {
    Packed(u128),
    Long(Box<[u32]>),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Codec {
    base: u128,
    len: usize,
    packed: bool,
}

impl Codec {
    pub(crate) fn new(alphabet_size: usize, len: usize) -> Self {
        let base = alphabet_size as u128;
        let packed = u32::try_from(len)
            .ok()
            .and_then(|l| base.max(1).checked_pow(l))
            .is_some();
        Codec { base, len, packed }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn encode(&self, w: &[usize]) -> WordKey {
        debug_assert_eq!(w.len(), self.len);
        if self.packed {
            let mut v: u128 = 0;
            for &s in w {
                v = v * self.base + s as u128;
            }
            WordKey::Packed(v)
        } else {
            WordKey::Long(w.iter().map(|&s| s as u32).collect())
        }
    }

    pub(crate) fn decode_into(&self, key: &WordKey, out: &mut Vec<usize>) {
        out.clear();
        match key {
            WordKey::Packed(v) => {
                out.resize(self.len, 0);
                if self.base > 1 {
                    let mut v = *v;
                    for slot in out.iter_mut().rev() {
                        *slot = (v % self.base) as usize;
                        v /= self.base;
                    }
                }
            }
            WordKey::Long(b) => out.extend(b.iter().map(|&s| s as usize)),
        }
    }

    pub(crate) fn decode(&self, key: &WordKey) -> StateWord {
        let mut v = Vec::with_capacity(self.len);
        self.decode_into(key, &mut v);
        StateWord(v)
    }
}

/// Lyndon test: `w` is strictly smaller than each of its proper rotations.
pub(crate) fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|r| {
        let rotated = w[r..].iter().chain(&w[..r]);
        w.iter().lt(rotated)
    })
}

/// Lexicographically least rotation of `w`.
pub fn least_rotation(w: &[usize]) -> Vec<usize> {
    (0..w.len().max(1))
        .map(|r| {
            let mut v = w[r.min(w.len())..].to_vec();
            v.extend_from_slice(&w[..r.min(w.len())]);
            v
        })
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lyndon_words() {
        assert!(is_lyndon(&[0, 1, 2]));
        assert!(!is_lyndon(&[1, 2, 0]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
        assert!(is_lyndon(&[0]));
        assert!(!is_lyndon(&[]));
    }

    #[test]
    fn least_rotation_picks_minimum() {
        assert_eq!(least_rotation(&[2, 0, 1]), vec![0, 1, 2]);
        assert_eq!(least_rotation(&[]), Vec::<usize>::new());
    }

    #[test]
    fn long_words_fall_back_to_boxed_keys() {
        let c = Codec::new(3, 90);
        let w: Vec<usize> = (0..90).map(|k| k % 3).collect();
        let key = c.encode(&w);
        assert!(matches!(key, WordKey::Long(_)));
        assert_eq!(c.decode(&key).0, w);
    }

    proptest! {
        #[test]
        fn packing_roundtrips_and_keeps_order(
            base in 1usize..6,
            a in proptest::collection::vec(0usize..6, 0..40),
            b in proptest::collection::vec(0usize..6, 0..40),
        ) {
            let len = a.len().min(b.len());
            let a: Vec<usize> = a[..len].iter().map(|s| s % base).collect();
            let b: Vec<usize> = b[..len].iter().map(|s| s % base).collect();
            let c = Codec::new(base, len);
            let (ka, kb) = (c.encode(&a), c.encode(&b));
            prop_assert_eq!(c.decode(&ka).0, a.clone());
            prop_assert_eq!(ka.cmp(&kb), a.cmp(&b));
        }
    }
}
