//! On-disk cache of structure tables keyed by type, rank and parabolic.
//! The cache only saves time: a missing, stale or unreadable entry is rebuilt.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use qlevi_core::quantum_ring::{StructureTable, TableEntry};
use qlevi_core::weyl::ParabolicContext;

/// Bumped whenever the table encoding or the construction changes.
pub const FORMAT_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "QLEVI_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    space: String,
    entries: Vec<TableEntry>,
}

pub struct TableCache {
    dir: Option<PathBuf>,
}

impl TableCache {
    /// A cache rooted at `$QLEVI_CACHE_DIR`, or `<tmp>/qlevi-cache`.
    pub fn new(enabled: bool) -> Self {
        let dir = enabled.then(|| {
            std::env::var_os(CACHE_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| std::env::temp_dir().join("qlevi-cache"))
        });
        Self { dir }
    }

    fn path(&self, ctx: &ParabolicContext) -> Option<PathBuf> {
        let rs = ctx.root_system();
        let nodes: Vec<String> = ctx.s_p().iter().map(|i| (i + 1).to_string()).collect();
        let name = format!("{}{}-p{}.v{FORMAT_VERSION}.json", rs.cartan_type(), rs.rank(), nodes.join("_"));
        self.dir.as_ref().map(|d| d.join(name))
    }

    pub fn table(&self, ctx: Arc<ParabolicContext>) -> qlevi_core::Result<Arc<StructureTable>> {
        let path = self.path(&ctx);
        if let Some(p) = &path {
            if let Some(t) = fs::read(p)
                .ok()
                .and_then(|bytes| serde_json::from_slice::<CacheFile>(&bytes).ok())
                .filter(|f| f.version == FORMAT_VERSION && f.space == ctx.name())
                .and_then(|f| StructureTable::from_entries(ctx.clone(), &f.entries).ok())
            {
                return Ok(Arc::new(t));
            }
        }
        let table = StructureTable::build(ctx.clone())?;
        if let Some(p) = path {
            // Write failures only cost a rebuild next time.
            let _ = store(&p, &ctx, &table);
        }
        Ok(Arc::new(table))
    }
}

fn store(path: &PathBuf, ctx: &ParabolicContext, table: &StructureTable) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let file = CacheFile {
        version: FORMAT_VERSION,
        space: ctx.name(),
        entries: table.entries(),
    };
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, path)
}
