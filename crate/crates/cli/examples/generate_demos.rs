//! Regenerates the JSON documents under `demo/` from the pinned
//! constructions in `wallcross_cli::demos`. The acceptance suite
//! compares the committed files against these values byte for byte,
//! so run this only when the demo geometry itself changes:
//!
//! ```text
//! cargo run -p wallcross-cli --example generate_demos
//! ```

use std::path::Path;

use serde::Serialize;
use wallcross_cli::demos;

fn write(dir: &Path, name: &str, value: &impl Serialize) {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).expect("demo values serialize");
    text.push('\n');
    std::fs::write(&path, text).unwrap_or_else(|e| panic!("write {}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo");
    std::fs::create_dir_all(&dir).expect("create demo directory");
    write(&dir, "trajectory_b12.json", &demos::pair_exchange(1));
    write(&dir, "trajectory_b13.json", &demos::loop_around(1));
    write(&dir, "square_flip.json", &demos::square_flip());
    write(&dir, "square_flip_interior.json", &demos::square_flip_interior());
    write(&dir, "m41_loop.json", &demos::m41_loop());
    write(&dir, "m52_loop.json", &demos::m52_loop());
}
