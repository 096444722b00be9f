//! The bundled proof corpus, checked in dependency order.

use std::path::Path;

use super::script::parse_scripts;
use super::session::{ScriptReport, Session};
use super::CalcError;

macro_rules! corpus_files {
    ($($f:literal),* $(,)?) => {
        /// Corpus files in checking order, relative to the corpus root.
        pub const CORPUS_FILES: &[&str] = &[$($f),*];
        const BUNDLED: &[&str] = &[$(include_str!(concat!("../../corpus/", $f))),*];
    };
}

corpus_files!(
    "prelude.lds",
    "lemma15.lds",
    "table2/row01.lds",
    "table2/row02.lds",
    "table2/row03.lds",
    "table2/row04.lds",
    "table2/row05.lds",
    "table2/row06.lds",
    "table2/row07.lds",
    "table2/row08.lds",
    "table2/row09.lds",
    "table2/row10.lds",
    "table2/row11.lds",
    "table2/row12.lds",
    "table2/row13.lds",
    "table2/row14.lds",
    "table2/row15.lds",
    "table2/row16.lds",
    "sigma.lds",
    "approx.lds",
    "dagger.lds",
    "skip6.lds",
    "ordering.lds",
    "skip9.lds",
    "mu-xi.lds",
    "final-kappa4.lds",
);

/// The seventeen ordinals the corpus puts in increasing order.
pub const MAIN_CHAIN: [&str; 17] = [
    "kappa0", "kappa1", "kappa2", "kappa2_5", "kappa3", "kappa1^15", "kappa2^15", "kappa2_5^15",
    "kappa2^14", "kappa2_5^14", "kappa2^13", "kappa2_5^13", "kappa2^7", "kappa2^6", "kappa2^5",
    "kappa4", "kappa3^5",
];

/// The refinement of the chain from `kappa2^7` on, increasing.
pub const TAIL_CHAIN: [&str; 13] = [
    "kappa2^7", "kappa2_5^11", "kappa3^11", "kappa2_5^10", "kappa3^10", "kappa2_5^9", "kappa3^9",
    "kappa2^6", "kappa3^7", "kappa2^5", "kappa3^6", "kappa4", "kappa3^5",
];

#[derive(Clone, Debug)]
pub struct Corpus {
    pub files: Vec<(String, String)>,
}

impl Corpus {
    pub fn bundled() -> Corpus {
        Corpus {
            files: CORPUS_FILES
                .iter()
                .zip(BUNDLED)
                .map(|(n, t)| (n.to_string(), t.to_string()))
                .collect(),
        }
    }

    /// Reads the same file list from `dir`, so an edited copy of the corpus
    /// can be checked in place of the bundled one.
    pub fn from_dir(dir: &Path) -> Result<Corpus, CalcError> {
        let files = CORPUS_FILES
            .iter()
            .map(|n| {
                std::fs::read_to_string(dir.join(n))
                    .map(|t| (n.to_string(), t))
                    .map_err(|e| CalcError::Corpus(format!("{}: {e}", dir.join(n).display())))
            })
            .collect::<Result<_, _>>()?;
        Ok(Corpus { files })
    }

    /// Files up to and including `last`.
    pub fn prefix(&self, last: &str) -> Corpus {
        let end = self
            .files
            .iter()
            .position(|(n, _)| n == last)
            .map_or(self.files.len(), |i| i + 1);
        Corpus {
            files: self.files[..end].to_vec(),
        }
    }

    pub fn replace(&mut self, name: &str, text: String) {
        if let Some(f) = self.files.iter_mut().find(|(n, _)| n == name) {
            f.1 = text;
        }
    }
}

/// Checks every script of `corpus` into a fresh session.
pub fn load_corpus(corpus: &Corpus) -> Result<(Session, Vec<ScriptReport>), CalcError> {
    let mut s = Session::new();
    let mut reports = Vec::new();
    for (name, text) in &corpus.files {
        let scripts = parse_scripts(text, s.names()).map_err(|e| match e {
            CalcError::Parse { line, msg } => CalcError::Parse {
                line,
                msg: format!("{name}: {msg}"),
            },
            e => e,
        })?;
        for sc in &scripts {
            reports.push(s.check_script(sc)?);
        }
    }
    Ok((s, reports))
}
