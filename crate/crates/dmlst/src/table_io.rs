//! Binary dump of a memo table, little-endian throughout:
//!
//! ```text
//! magic "DMLSTTBL" | version u16 | alpha f64 | n u32 | arc count u32 | arcs (u32, u32)*
//! entry count u64 | entries
//! entry = set(vertices) set(bn) set(fl) | present u8 | [leaves u32 | arc count u32 | arcs]
//! set   = len u32 | ids u32*
//! ```

use std::io::{self, Read, Write};

use dmlst_core::memo::{MemoEntry, MemoKey, MemoTable};
use dmlst_core::{Arc, DiGraph, VertexId};

pub const MAGIC: &[u8; 8] = b"DMLSTTBL";
pub const VERSION: u16 = 1;

fn put_u32(w: &mut impl Write, x: usize) -> io::Result<()> {
    w.write_all(&u32::try_from(x).expect("fits in u32").to_le_bytes())
}

fn put_ids(w: &mut impl Write, ids: &[VertexId]) -> io::Result<()> {
    put_u32(w, ids.len())?;
    ids.iter().try_for_each(|v| put_u32(w, v.index()))
}

fn put_arcs(w: &mut impl Write, arcs: impl ExactSizeIterator<Item = Arc>) -> io::Result<()> {
    put_u32(w, arcs.len())?;
    for a in arcs {
        put_u32(w, a.tail.index())?;
        put_u32(w, a.head.index())?;
    }
    Ok(())
}

pub fn write_table(w: &mut impl Write, t: &MemoTable) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&t.alpha().to_le_bytes())?;
    let g = t.graph();
    put_u32(w, g.capacity())?;
    let arcs: Vec<Arc> = g.arcs().collect();
    put_arcs(w, arcs.into_iter())?;
    w.write_all(&(t.len() as u64).to_le_bytes())?;
    for (key, entry) in t.iter() {
        put_ids(w, &key.vertices)?;
        put_ids(w, &key.bn)?;
        put_ids(w, &key.fl)?;
        match entry {
            None => w.write_all(&[0])?,
            Some(e) => {
                w.write_all(&[1])?;
                put_u32(w, e.leaves)?;
                put_arcs(w, e.tree.iter().copied())?;
            }
        }
    }
    Ok(())
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

fn get<const N: usize>(r: &mut impl Read) -> io::Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

fn get_u32(r: &mut impl Read) -> io::Result<usize> {
    Ok(u32::from_le_bytes(get(r)?) as usize)
}

fn get_ids(r: &mut impl Read) -> io::Result<Vec<VertexId>> {
    let len = get_u32(r)?;
    (0..len).map(|_| get_u32(r).map(VertexId::from)).collect()
}

fn get_arcs(r: &mut impl Read) -> io::Result<Vec<Arc>> {
    let len = get_u32(r)?;
    (0..len).map(|_| Ok(Arc::new(get_u32(r)?, get_u32(r)?))).collect()
}

pub fn read_table(r: &mut impl Read) -> io::Result<MemoTable> {
    if &get::<8>(r)? != MAGIC {
        return Err(bad("not a memo table file"));
    }
    let version = u16::from_le_bytes(get(r)?);
    if version != VERSION {
        return Err(bad(&format!("unsupported table version {version}")));
    }
    let alpha = f64::from_le_bytes(get(r)?);
    let n = get_u32(r)?;
    let g = DiGraph::from_arcs(n, get_arcs(r)?).map_err(|e| bad(&e.to_string()))?;
    let count = u64::from_le_bytes(get(r)?);
    let mut t = MemoTable::new(g, alpha);
    for _ in 0..count {
        let key = MemoKey { vertices: get_ids(r)?, bn: get_ids(r)?, fl: get_ids(r)? };
        let entry = match get::<1>(r)?[0] {
            0 => None,
            1 => Some(MemoEntry { leaves: get_u32(r)?, tree: get_arcs(r)? }),
            _ => return Err(bad("bad entry tag")),
        };
        t.insert(key, entry);
    }
    Ok(t)
}
