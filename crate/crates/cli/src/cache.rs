//! On-disk cache of the multiplication table and module family.
//!
//! One file per (type, mode). The file is a small JSON header carrying the
//! artifact version and a SHA-256 of the payload, which is stored as an
//! embedded string so the checksum covers exact bytes. Stale or damaged
//! entries are recomputed with a warning; an unwritable directory is an
//! error.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use icq::rootsystem::{CartanType, WeylGroup};
use icq::schubert::{CohRing, TableDocument};
use icq::soergel::{build_all, BuildMode, ModuleFamily};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
struct Header {
    version: String,
    system: String,
    mode: BuildMode,
    sha256: String,
    payload: String,
}

#[derive(Serialize, Deserialize)]
struct Payload {
    ring: TableDocument,
    family: ModuleFamily,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

fn mode_name(mode: BuildMode) -> &'static str {
    match mode {
        BuildMode::Shortcut => "shortcut",
        BuildMode::FullWord => "full",
    }
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(&self, ct: CartanType, mode: BuildMode) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{ct}-{}.json", mode_name(mode))))
    }

    /// The ring and module family, from the cache when a sound entry exists.
    pub fn load(&self, ct: CartanType, mode: BuildMode) -> Result<(CohRing, ModuleFamily)> {
        let group = WeylGroup::of_type(ct)?;
        let Some(path) = self.path(ct, mode) else {
            return compute(group, mode);
        };
        match read(&path, &group, ct, mode) {
            Ok(Some(hit)) => return Ok(hit),
            Ok(None) => {}
            Err(why) => eprintln!("warning: ignoring cache entry {}: {why:#}; recomputing", path.display()),
        }
        let (ring, family) = compute(group, mode)?;
        write(&path, ct, mode, &ring, &family)?;
        Ok((ring, family))
    }
}

fn compute(group: WeylGroup, mode: BuildMode) -> Result<(CohRing, ModuleFamily)> {
    let ring = CohRing::build(group)?;
    let family = build_all(&ring, mode)?;
    Ok((ring, family))
}

fn read(path: &Path, group: &WeylGroup, ct: CartanType, mode: BuildMode) -> Result<Option<(CohRing, ModuleFamily)>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let header: Header = serde_json::from_str(&text).context("unreadable header")?;
    anyhow::ensure!(
        header.version == VERSION,
        "written by version {}, this is {VERSION}",
        header.version
    );
    anyhow::ensure!(
        header.system == ct.to_string() && header.mode == mode,
        "entry is for {} ({})",
        header.system,
        mode_name(header.mode)
    );
    anyhow::ensure!(digest(header.payload.as_bytes()) == header.sha256, "checksum mismatch");
    let payload: Payload = serde_json::from_str(&header.payload).context("unreadable payload")?;
    let ring = CohRing::from_document(group.clone(), &payload.ring)?;
    anyhow::ensure!(
        payload.family.len() == ring.dim() && payload.family.mode() == mode,
        "module family does not fit the group"
    );
    Ok(Some((ring, payload.family)))
}

fn write(path: &Path, ct: CartanType, mode: BuildMode, ring: &CohRing, family: &ModuleFamily) -> Result<()> {
    let payload = serde_json::to_string(&Payload {
        ring: ring.to_document(),
        family: family.clone(),
    })?;
    let header = Header {
        version: VERSION.to_string(),
        system: ct.to_string(),
        mode,
        sha256: digest(payload.as_bytes()),
        payload,
    };
    let dir = path.parent().expect("cache paths have a directory");
    fs::create_dir_all(dir).with_context(|| format!("cannot create cache directory {}", dir.display()))?;
    // Write then rename, so a concurrent reader never sees half a file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&header)?)
        .with_context(|| format!("cannot write cache entry in {}", dir.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot write cache entry {}", path.display()))?;
    Ok(())
}
