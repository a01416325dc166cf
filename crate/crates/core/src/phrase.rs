//! Normalised sentences, language codes and canonical unordered pairs.

use std::borrow::Borrow;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

use crate::error::{Error, Result};

/// A full sentence after normalisation (NFC, whitespace runs collapsed to a
/// single space, no leading or trailing whitespace). Case and punctuation are
/// kept as-is.
///
/// Equality, hashing and ordering look at the text only; ordering is by
/// UTF-8 bytes.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Phrase {
    text: Box<str>,
    char_len: usize,
}

/// Applies phrase normalisation without constructing a [`Phrase`].
pub fn normalize(raw: &str) -> String {
    let nfc: std::borrow::Cow<'_, str> = match is_nfc_quick(raw.chars()) {
        IsNormalized::Yes => raw.into(),
        _ => raw.nfc().collect::<String>().into(),
    };
    let mut out = String::with_capacity(nfc.len());
    for word in nfc.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

impl Phrase {
    /// Normalises `raw`; returns `None` if nothing is left.
    pub fn new(raw: &str) -> Option<Phrase> {
        let text = normalize(raw);
        if text.is_empty() {
            return None;
        }
        let char_len = text.chars().count();
        Some(Phrase {
            text: text.into_boxed_str(),
            char_len,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Number of Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.char_len
    }
}

impl TryFrom<String> for Phrase {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Phrase::new(&value)
            .ok_or_else(|| Error::InvalidArgument("phrase is empty after normalization".into()))
    }
}

impl From<Phrase> for String {
    fn from(p: Phrase) -> String {
        p.text.into()
    }
}

impl Deref for Phrase {
    type Target = str;

    fn deref(&self) -> &str {
        &self.text
    }
}

impl Borrow<str> for Phrase {
    fn borrow(&self) -> &str {
        &self.text
    }
}

impl AsRef<str> for Phrase {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

impl PartialEq for Phrase {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Phrase {}

impl Hash for Phrase {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

impl PartialOrd for Phrase {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Phrase {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.text.as_bytes().cmp(other.text.as_bytes())
    }
}

impl fmt::Debug for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.text, f)
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A language code such as `en` or `fr`. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Lang(Arc<str>);

impl Lang {
    /// Accepts ASCII letters, digits, `-` and `_`.
    pub fn new(code: &str) -> Result<Lang> {
        let ok = !code.is_empty()
            && code
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_');
        if ok {
            Ok(Lang(code.into()))
        } else {
            Err(Error::InvalidArgument(format!("invalid language code {code:?}")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Lang {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Lang::new(&value)
    }
}

impl From<Lang> for String {
    fn from(l: Lang) -> String {
        l.0.to_string()
    }
}

impl fmt::Debug for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Unordered pair of distinct target phrases in canonical order (`lo < hi` by bytes).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey {
    lo: Phrase,
    hi: Phrase,
}

impl PairKey {
    /// Returns `None` for identity pairs.
    pub fn new(a: Phrase, b: Phrase) -> Option<PairKey> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(PairKey { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(PairKey { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Normalises both sides first.
    pub fn from_raw(a: &str, b: &str) -> Option<PairKey> {
        PairKey::new(Phrase::new(a)?, Phrase::new(b)?)
    }

    pub fn lo(&self) -> &Phrase {
        &self.lo
    }

    pub fn hi(&self) -> &Phrase {
        &self.hi
    }

    /// Stable content hash of the canonical pair: the first 12 bytes of
    /// SHA-256 over `lo \0 hi`, hex encoded.
    pub fn pair_id(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.lo.as_bytes());
        hasher.update([0u8]);
        hasher.update(self.hi.as_bytes());
        let digest = hasher.finalize();
        digest[..12].iter().map(|b| format!("{b:02x}")).collect()
    }
}
