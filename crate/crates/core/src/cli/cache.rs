use crate::error::{Error, Result};
use crate::geometry::{vertex_graph_capped, FractalKind, VertexGraph};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 8] = b"FDFCACHE";
pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    /// No entry, or an entry from another format version.
    Miss,
    /// The entry failed its checksum or header check and was rebuilt.
    Rebuilt,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    version: u32,
}

fn kind_byte(k: FractalKind) -> u8 {
    match k {
        FractalKind::SG => 0,
        FractalKind::SC => 1,
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Cache("truncated entry".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self) -> Result<usize> {
        let n = self.u64()? as usize;
        if n > self.buf.len() {
            return Err(Error::Cache("bad length".into()));
        }
        Ok(n)
    }
}

fn encode_graph(g: &VertexGraph) -> Vec<u8> {
    let mut p = Vec::new();
    p.extend((g.num_vertices() as u64).to_le_bytes());
    for &(x, y) in g.all_raw_coords() {
        p.extend(x.to_le_bytes());
        p.extend(y.to_le_bytes());
    }
    for &(c, j) in g.address_table() {
        p.extend(c.to_le_bytes());
        p.push(j);
    }
    p.extend((g.cells_flat().len() as u64).to_le_bytes());
    for &v in g.cells_flat() {
        p.extend(v.to_le_bytes());
    }
    p.extend((g.edges().len() as u64).to_le_bytes());
    for &(i, j, m) in g.edges() {
        p.extend(i.to_le_bytes());
        p.extend(j.to_le_bytes());
        p.push(m);
    }
    p
}

fn decode_graph(kind: FractalKind, level: usize, payload: &[u8]) -> Result<VertexGraph> {
    let mut r = Reader { buf: payload, pos: 0 };
    let nv = r.len()?;
    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        coords.push((r.i64()?, r.i64()?));
    }
    let mut address = Vec::with_capacity(nv);
    for _ in 0..nv {
        address.push((r.u32()?, r.u8()?));
    }
    let nc = r.len()?;
    let cells = (0..nc).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let ne = r.len()?;
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        edges.push((r.u32()?, r.u32()?, r.u8()?));
    }
    if r.pos != payload.len() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    VertexGraph::from_parts(kind, level, coords, address, cells, edges)
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir, version: CACHE_VERSION }
    }

    pub fn with_version(dir: Option<PathBuf>, version: u32) -> Self {
        Cache { dir, version }
    }

    pub fn path(&self, kind: FractalKind, level: usize, object: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}-{level}-{object}-v{}.bin", kind.tag(), self.version)))
    }

    fn wrap(&self, kind: FractalKind, level: usize, object: &str, payload: &[u8]) -> Vec<u8> {
        let mut b = Vec::with_capacity(payload.len() + 96);
        b.extend(MAGIC);
        b.extend(self.version.to_le_bytes());
        b.push(kind_byte(kind));
        b.extend((level as u32).to_le_bytes());
        b.extend((object.len() as u32).to_le_bytes());
        b.extend(object.as_bytes());
        b.extend((payload.len() as u64).to_le_bytes());
        b.extend(payload);
        let digest = Sha256::digest(&b);
        b.extend(digest.as_slice());
        b
    }

    fn unwrap<'a>(&self, kind: FractalKind, level: usize, object: &str, b: &'a [u8]) -> Result<&'a [u8]> {
        if b.len() < 32 {
            return Err(Error::Cache("entry too short".into()));
        }
        let (body, digest) = b.split_at(b.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let mut r = Reader { buf: body, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        if r.u32()? != self.version {
            return Err(Error::Cache("format version mismatch".into()));
        }
        if r.u8()? != kind_byte(kind) || r.u32()? as usize != level {
            return Err(Error::Cache("entry belongs to another kind or level".into()));
        }
        let tl = r.u32()? as usize;
        if r.take(tl)? != object.as_bytes() {
            return Err(Error::Cache("entry holds another object".into()));
        }
        let pl = r.len()?;
        let payload = r.take(pl)?;
        if r.pos != body.len() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        Ok(payload)
    }

    fn store(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `V_n`, read from the cache when a valid entry exists and stored otherwise.
    pub fn vertex_graph(&self, kind: FractalKind, level: usize, cap: usize) -> Result<(VertexGraph, CacheStatus)> {
        const OBJECT: &str = "vertex_graph";
        let Some(path) = self.path(kind, level, OBJECT) else {
            return Ok((vertex_graph_capped(kind, level, cap)?, CacheStatus::Disabled));
        };
        let mut status = CacheStatus::Miss;
        if let Ok(bytes) = std::fs::read(&path) {
            match self.unwrap(kind, level, OBJECT, &bytes).and_then(|p| decode_graph(kind, level, p)) {
                Ok(g) => {
                    log::info!("cache hit {}", path.display());
                    return Ok((g, CacheStatus::Hit));
                }
                Err(e) => {
                    log::warn!("rebuilding cache entry {}: {e}", path.display());
                    status = CacheStatus::Rebuilt;
                }
            }
        }
        let g = vertex_graph_capped(kind, level, cap)?;
        let bytes = self.wrap(kind, level, OBJECT, &encode_graph(&g));
        self.store(&path, &bytes)?;
        log::info!("cache store {}", path.display());
        Ok((g, status))
    }
}
