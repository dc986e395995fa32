//! On-disk cache of quotient models.
//!
//! The expensive object behind most suites is the recorded image basis of
//! `T - lambda` over a truncation ball.  It is persisted in the sparse
//! matrix text format under a content-addressed name carrying every input
//! that determines it: prime, field degree, weight degree, eigenvalue,
//! depth, slack, and the artifact version.  A stale or corrupt file is
//! never trusted: loads re-validate the header against the requested
//! parameters and fall back to recomputation.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::algebra::{read_matrix_text, write_matrix_text, Fq, SparseMat};
use crate::cind::QuotientCtx;
use crate::group::Ball;
use crate::weights::Weight;
use crate::{Error, Result};

/// Environment variable naming the cache directory.  Unset disables
/// persistence; every build is then fresh.
pub const CACHE_DIR_ENV: &str = "SL2MODP_CACHE_DIR";

/// Handle to the cache directory, or to nothing.
#[derive(Clone, Debug)]
pub struct QuotientCache {
    dir: Option<PathBuf>,
}

impl QuotientCache {
    pub fn from_env() -> QuotientCache {
        QuotientCache {
            dir: std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from),
        }
    }

    pub fn disabled() -> QuotientCache {
        QuotientCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> QuotientCache {
        QuotientCache {
            dir: Some(dir.into()),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    /// Content-addressed file name for one quotient model.
    pub fn key(weight: Weight, lambda: Fq, depth: u32, slack: u32) -> String {
        let ctx = weight.ctx();
        let coeffs: Vec<String> = lambda.coeffs().iter().map(|c| c.to_string()).collect();
        format!(
            "tmat_p{}_k{}_r{}_l{}_n{}_R{}_v{}.txt",
            ctx.p(),
            ctx.k(),
            weight.r(),
            coeffs.join("-"),
            depth,
            slack,
            env!("CARGO_PKG_VERSION")
        )
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key))
    }

    /// Loads the model if a valid entry exists, otherwise builds and
    /// stores it.  `hits` counts loads served from disk.
    pub fn load_or_build(
        &self,
        weight: Weight,
        lambda: Fq,
        depth: u32,
        slack: u32,
        hits: &AtomicU64,
    ) -> Result<QuotientCtx> {
        let Some(path) = self.path_for(&Self::key(weight, lambda, depth, slack)) else {
            return QuotientCtx::build(weight, lambda, depth, slack);
        };
        if path.exists() {
            match load_entry(&path, weight, lambda, depth, slack) {
                Ok(q) => {
                    hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(q);
                }
                Err(Error::Io(e)) => return Err(Error::Io(e)),
                // Any integrity failure falls through to recomputation.
                Err(_) => {}
            }
        }
        let q = QuotientCtx::build(weight, lambda, depth, slack)?;
        store_atomic(&path, &q.image_matrix())?;
        Ok(q)
    }

    /// Removes one entry.  Missing entries are not an error.
    pub fn invalidate(&self, weight: Weight, lambda: Fq, depth: u32, slack: u32) -> Result<()> {
        if let Some(path) = self.path_for(&Self::key(weight, lambda, depth, slack)) {
            match std::fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(Error::Io(e)),
            }
        }
        Ok(())
    }
}

/// Reads and validates one cache file.  The header must agree with every
/// requested parameter; disagreement means the name and the content drifted
/// apart, which is treated as corruption.
fn load_entry(
    path: &Path,
    weight: Weight,
    lambda: Fq,
    depth: u32,
    slack: u32,
) -> Result<QuotientCtx> {
    let file = std::fs::File::open(path)?;
    let mat = read_matrix_text(std::io::BufReader::new(file))
        .map_err(|e| Error::Checksum(format!("{}: {e}", path.display())))?;
    let ctx = weight.ctx();
    if mat.ctx().p() != ctx.p() || mat.ctx().k() != ctx.k() {
        return Err(Error::Checksum(format!(
            "{}: header field ({}, {}) does not match requested ({}, {})",
            path.display(),
            mat.ctx().p(),
            mat.ctx().k(),
            ctx.p(),
            ctx.k()
        )));
    }
    let expected_rows = Ball::build(ctx.p(), depth + slack).sphere(depth).end * weight.dim();
    if mat.rows() != expected_rows {
        return Err(Error::Checksum(format!(
            "{}: header rows {} do not match the depth-{} ball ({} coordinates)",
            path.display(),
            mat.rows(),
            depth,
            expected_rows
        )));
    }
    QuotientCtx::from_image_matrix(weight, lambda, depth, slack, &mat)
        .map_err(|e| Error::Checksum(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory, then renames.
/// The rename is atomic, so readers only ever see complete entries.
fn store_atomic(path: &Path, mat: &SparseMat) -> Result<()> {
    let dir = path.parent().ok_or_else(|| {
        Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "cache path has no parent directory",
        ))
    })?;
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        write_matrix_text(mat, &mut w)?;
        use std::io::Write;
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FqCtx;

    fn weight(p: u32, r: u32) -> Weight {
        Weight::new(FqCtx::new(p, 1).unwrap(), r).unwrap()
    }

    #[test]
    fn keys_separate_every_parameter() {
        let w = weight(5, 2);
        let z = w.ctx().zero();
        let base = QuotientCache::key(w, z, 4, 1);
        assert_eq!(
            base,
            format!("tmat_p5_k1_r2_l0_n4_R1_v{}.txt", env!("CARGO_PKG_VERSION"))
        );
        let other = QuotientCache::key(weight(5, 3), z, 4, 1);
        assert_ne!(base, other);
        assert_ne!(base, QuotientCache::key(w, w.ctx().one(), 4, 1));
        assert_ne!(base, QuotientCache::key(w, z, 3, 1));
        assert_ne!(base, QuotientCache::key(w, z, 4, 2));
    }

    #[test]
    fn store_load_round_trips_bit_exactly() {
        let dir = std::env::temp_dir().join(format!("sl2modp-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = QuotientCache::at(&dir);
        let w = weight(3, 1);
        let z = w.ctx().zero();
        let hits = AtomicU64::new(0);

        let cold = cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        assert_eq!(hits.load(Ordering::Relaxed), 0);
        let path = dir.join(QuotientCache::key(w, z, 2, 1));
        let stored = std::fs::read(&path).unwrap();

        let warm = cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        assert_eq!(hits.load(Ordering::Relaxed), 1);
        assert_eq!(std::fs::read(&path).unwrap(), stored);
        assert_eq!(cold.inner_dim(), warm.inner_dim());
        assert_eq!(cold.image_rank(), warm.image_rank());
        assert_eq!(cold.quotient_dim(), warm.quotient_dim());
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_matrix_text(&cold.image_matrix(), &mut a).unwrap();
        write_matrix_text(&warm.image_matrix(), &mut b).unwrap();
        assert_eq!(a, b);

        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn corruption_recomputes_instead_of_failing() {
        let dir = std::env::temp_dir().join(format!("sl2modp-cache-corrupt-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = QuotientCache::at(&dir);
        let w = weight(3, 1);
        let z = w.ctx().zero();
        let hits = AtomicU64::new(0);

        let fresh = cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        let path = dir.join(QuotientCache::key(w, z, 2, 1));
        std::fs::write(&path, b"5 1 9 9 1\n0 0 junk\n").unwrap();
        let again = cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        assert_eq!(hits.load(Ordering::Relaxed), 0, "corrupt entry must miss");
        assert_eq!(fresh.image_rank(), again.image_rank());
        // The recomputation healed the entry on disk.
        let healed = cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        assert_eq!(hits.load(Ordering::Relaxed), 1);
        assert_eq!(healed.image_rank(), fresh.image_rank());

        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn mismatched_header_is_rejected_as_corrupt() {
        let dir = std::env::temp_dir().join(format!("sl2modp-cache-header-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = QuotientCache::at(&dir);
        let w = weight(3, 1);
        let z = w.ctx().zero();
        let hits = AtomicU64::new(0);
        cache.load_or_build(w, z, 2, 1, &hits).unwrap();

        // A structurally valid file whose dimensions belong to some other
        // model must not load.
        let path = dir.join(QuotientCache::key(w, z, 2, 1));
        let err = match super::load_entry(&path, weight(3, 2), z, 2, 1) {
            Ok(_) => panic!("entry with foreign dimensions loaded"),
            Err(e) => e,
        };
        assert!(matches!(err, Error::Checksum(_)), "got {err:?}");

        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn invalidate_removes_the_entry() {
        let dir = std::env::temp_dir().join(format!("sl2modp-cache-inval-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = QuotientCache::at(&dir);
        let w = weight(3, 1);
        let z = w.ctx().zero();
        let hits = AtomicU64::new(0);
        cache.load_or_build(w, z, 2, 1, &hits).unwrap();
        let path = dir.join(QuotientCache::key(w, z, 2, 1));
        assert!(path.exists());
        cache.invalidate(w, z, 2, 1).unwrap();
        assert!(!path.exists());
        cache.invalidate(w, z, 2, 1).unwrap();

        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn disabled_cache_still_builds() {
        let hits = AtomicU64::new(0);
        let q = QuotientCache::disabled()
            .load_or_build(weight(3, 0), weight(3, 0).ctx().zero(), 2, 1, &hits)
            .unwrap();
        assert!(q.quotient_dim() > 0);
        assert_eq!(hits.load(Ordering::Relaxed), 0);
    }
}
