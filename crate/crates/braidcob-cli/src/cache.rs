//! Optional on-disk cache of simplified word complexes.
//!
//! Enabled by setting `BRAIDCOB_CACHE_DIR`.  Entries are keyed by a digest
//! of the sign convention version, the strand count, and the letter word,
//! so stale files from an older convention are never reused.  The cache is
//! purely a speedup: a corrupt or mismatched entry is recomputed and
//! overwritten, never trusted.

use std::path::PathBuf;
use std::sync::Arc;

use braidcob::braid::BraidWord;
use braidcob::complex::ChainComplex;
use braidcob::functor::reduced_word_complex;

use crate::report::digest;
use crate::serial;

/// Bumped whenever the differential sign conventions change.
pub const CONVENTION_VERSION: &str = "1";

fn cache_path(word: &BraidWord) -> Option<PathBuf> {
    let dir = std::env::var_os("BRAIDCOB_CACHE_DIR")?;
    let letters: Vec<String> = word.letters().iter().map(|l| l.to_string()).collect();
    let key = digest(&[CONVENTION_VERSION, &word.strands().to_string(), &letters.join(",")]);
    Some(PathBuf::from(dir).join(format!("{key}.json")))
}

/// The simplified complex of a braid word, read from the cache when a
/// valid entry exists and written back otherwise.
pub fn cached_reduced(word: &BraidWord) -> Arc<ChainComplex> {
    let Some(path) = cache_path(word) else {
        return Arc::clone(&reduced_word_complex(word).reduced);
    };
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Some(c) = serial::parse_cached_complex(&text, word.strands() - 1) {
            return c;
        }
    }
    let reduced = Arc::clone(&reduced_word_complex(word).reduced);
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    if let Ok(text) = serde_json::to_string_pretty(&serial::complex_value(&reduced)) {
        let _ = std::fs::write(&path, text);
    }
    Arc::clone(&reduced)
}
