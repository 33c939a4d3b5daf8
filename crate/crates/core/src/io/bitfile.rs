use std::io::{Read, Write};

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::sumset::SumsetBitmap;

pub const BITMAP_MAGIC: &[u8; 8] = b"PSPOWBIT";
pub const BITMAP_VERSION: u32 = 1;
const HEADER_LEN: usize = 32;

/// Binary layout, little-endian: magic (8), version u32, s u32, N u64,
/// distinct u8, zero padding to 32 bytes, then `⌈N/64⌉` u64 words where bit
/// `i` stands for the integer `i + 1`.
pub fn write_bitmap<W: Write>(set: &SumsetBitmap, mut w: W) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[..8].copy_from_slice(BITMAP_MAGIC);
    header[8..12].copy_from_slice(&BITMAP_VERSION.to_le_bytes());
    header[12..16].copy_from_slice(&set.s.to_le_bytes());
    header[16..24].copy_from_slice(&set.limit.to_le_bytes());
    header[24] = set.distinct as u8;
    w.write_all(&header)?;
    for word in set.members.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bitmap<R: Read>(mut r: R) -> Result<SumsetBitmap> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| Error::format("truncated bitmap header"))?;
    if &header[..8] != BITMAP_MAGIC {
        return Err(Error::format("not a sumset bitmap file"));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != BITMAP_VERSION {
        return Err(Error::format(format!(
            "unsupported bitmap version {version}"
        )));
    }
    let s = u32::from_le_bytes(header[12..16].try_into().unwrap());
    let limit = u64::from_le_bytes(header[16..24].try_into().unwrap());
    let distinct = match header[24] {
        0 => false,
        1 => true,
        x => return Err(Error::format(format!("bad distinct flag {x}"))),
    };
    let n_words = limit.div_ceil(64) as usize;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != n_words * 8 {
        return Err(Error::format(format!(
            "bitmap body has {} bytes, expected {}",
            raw.len(),
            n_words * 8
        )));
    }
    let words: Vec<u64> = raw
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let members = Bitmap::from_words(limit, words.clone())
        .filter(|m| m.words() == words.as_slice())
        .ok_or_else(|| Error::format("bits set beyond N"))?;
    Ok(SumsetBitmap {
        s,
        limit,
        distinct,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::s_fold_sumset;

    #[test]
    fn round_trip_and_corruption() {
        let set = s_fold_sumset(&[1, 4, 9, 16, 25, 36], 2, 130, true);
        let mut buf = Vec::new();
        write_bitmap(&set, &mut buf).unwrap();
        assert_eq!(buf.len(), 32 + 3 * 8);
        assert_eq!(read_bitmap(&buf[..]).unwrap(), set);
        assert!(read_bitmap(&buf[..buf.len() - 1]).is_err());
        let mut v = buf.clone();
        v[8] = 2;
        assert!(read_bitmap(&v[..]).is_err());
    }
}
