//! On-disk cache of induced-module action matrices keyed by `(p, λ)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cartan::{RestrictedAlgebra, Weight};
use crate::induction::{build_induced, gl2_simple, InducedModule};
use crate::repstructure::{MatrixModule, PbwTags, SparseMat};
use crate::Error;

/// Format version; bump whenever the basis or engine conventions change.
pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Dump {
    version: u32,
    p: u32,
    lambda: Weight,
    label: String,
    weights: Vec<Weight>,
    actions: Vec<SparseMat>,
    tags: Option<PbwTags>,
}

/// Path of the cache file for `Z(λ)` at `p`.
pub fn cache_path(dir: &Path, p: u32, lambda: Weight) -> PathBuf {
    dir.join(format!("z-p{p}-{}-{}.json", lambda.0, lambda.1))
}

/// Serializes `Z(λ)` to a deterministic text dump.
pub fn dump(z: &InducedModule) -> String {
    let m = &z.module;
    let d = Dump {
        version: CACHE_VERSION,
        p: z.p(),
        lambda: z.lambda(),
        label: m.label().to_string(),
        weights: m.weights().to_vec(),
        actions: m.actions().to_vec(),
        tags: m.tags().cloned(),
    };
    serde_json::to_string(&d).expect("dump serializes")
}

/// Parses a dump. `Ok(None)` is a miss (other version, prime or weight);
/// `Err` means the text is corrupt.
pub fn load(text: &str, p: u32, lambda: Weight) -> Result<Option<InducedModule>, Error> {
    let d: Dump = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("corrupt cache: {e}")))?;
    if d.version != CACHE_VERSION || d.p != p || d.lambda != lambda {
        return Ok(None);
    }
    let gl2 = gl2_simple(p, lambda)?;
    let module = MatrixModule::new(p, d.label, d.weights, d.actions, d.tags)?;
    Ok(Some(InducedModule { gl2, module }))
}

/// `Z(λ)` from the cache directory if present and valid, built and stored
/// otherwise. A corrupt file is reported and rebuilt.
pub fn induced_cached(alg: &RestrictedAlgebra, lambda: Weight, dir: Option<&Path>) -> Result<InducedModule, Error> {
    let Some(dir) = dir else {
        return build_induced(alg, lambda);
    };
    let path = cache_path(dir, alg.p(), lambda);
    if let Ok(text) = fs::read_to_string(&path) {
        match load(&text, alg.p(), lambda) {
            Ok(Some(z)) if z.module.actions().len() == alg.dim() => {
                log::debug!("cache hit {}", path.display());
                return Ok(z);
            }
            Ok(_) => log::info!("cache miss {}", path.display()),
            Err(e) => log::warn!("{}: {e}; rebuilding", path.display()),
        }
    }
    let z = build_induced(alg, lambda)?;
    if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(&path, dump(&z))) {
        log::warn!("cannot write {}: {e}", path.display());
    }
    Ok(z)
}
