//! Regenerates the sample inputs under `data/`.
//!
//! Run from the workspace root: `cargo run -p bordcalc --example make_corpus`.
//! Output is deterministic; the test suite checks the committed files against
//! a fresh generation.

use std::fs;
use std::path::Path;

#[path = "../tests/common/corpus.rs"]
mod corpus;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for (rel, text) in corpus::generate() {
        let path = root.join(&rel);
        fs::create_dir_all(path.parent().expect("file has a parent")).expect("create data directory");
        fs::write(&path, text).expect("write corpus file");
        println!("{rel}");
    }
}
