pub mod asym;
pub mod depth;
pub mod simulate;

use crate::output::Meta;

pub fn base_meta(command: &str, seed: Option<u64>, manifold: &str) -> Meta {
    let mut meta = Meta::default();
    meta.push("command", command);
    meta.push("seed", seed.map_or_else(|| "none".to_string(), |s| s.to_string()));
    meta.push("version", env!("CARGO_PKG_VERSION"));
    meta.push("manifold", manifold);
    meta
}
