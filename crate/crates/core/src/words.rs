//! Chacón blocks, the central window of the Chacón point and exact pattern
//! search.
//!
//! Blocks follow `B_1 = 0010`, `B_{n+1} = B_n B_n 1 B_n`. The Chacón point
//! `ω` satisfies `ω[-l_K .. l_K) = B_K B_K` for every depth `K`, where
//! `l_K = (3^{K+1} - 1)/2` is the length of `B_K`. Only finite windows of
//! `ω` are ever materialised.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest depth materialised by default (`l_12 = 797161`).
pub const DEFAULT_DEPTH_CAP: u32 = 12;

/// Largest `e` with `3^e` representable as `i64`.
const MAX_POW3_EXP_I64: u32 = 39;

/// `3^e` as an exact big integer.
pub fn pow3(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(3u8), e as usize)
}

/// `3^e` as `i64`, or an overflow error.
pub fn pow3_i64(e: u32) -> Result<i64> {
    if e > MAX_POW3_EXP_I64 {
        return Err(Error::Overflow("3^e"));
    }
    Ok(3i64.pow(e))
}

/// Length of `B_n`, `(3^{n+1} - 1)/2`, exact for every `n`.
///
/// `n = 0` gives 1, matching the degenerate block `B_0 = 0` from which the
/// substitution generates `B_1`.
pub fn block_length(n: u32) -> BigInt {
    (pow3(n + 1) - BigInt::one()) / 2
}

/// Length of `B_n` as `i64`.
pub fn block_length_i64(n: u32) -> Result<i64> {
    Ok((pow3_i64(n + 1)? - 1) / 2)
}

/// A nonempty finite word over `{0,1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<u8>);

impl Block {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidLetter(char::from(b'0' + bad.min(9))));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn check_depth(n: u32, cap: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDepth(n));
    }
    if n > cap {
        return Err(Error::DepthExceedsCap { depth: n, cap });
    }
    Ok(())
}

/// `B_n` under the default depth cap.
pub fn chacon_block(n: u32) -> Result<Block> {
    chacon_block_with_cap(n, DEFAULT_DEPTH_CAP)
}

/// `B_n` built by the concatenation recursion `B_{n+1} = B_n B_n 1 B_n`.
pub fn chacon_block_with_cap(n: u32, cap: u32) -> Result<Block> {
    check_depth(n, cap)?;
    let mut word = vec![0, 0, 1, 0];
    for _ in 1..n {
        let mut next = Vec::with_capacity(3 * word.len() + 1);
        next.extend_from_slice(&word);
        next.extend_from_slice(&word);
        next.push(1);
        next.extend_from_slice(&word);
        word = next;
    }
    Ok(Block(word))
}

/// Applies `0 ↦ 0010`, `1 ↦ 1` letterwise.
pub fn substitute(w: &Block) -> Block {
    let mut out = Vec::with_capacity(4 * w.len());
    for &b in w.letters() {
        if b == 0 {
            out.extend_from_slice(&[0, 0, 1, 0]);
        } else {
            out.push(1);
        }
    }
    Block(out)
}

/// The letters of `ω` on positions `start .. start + letters.len()`, where
/// `start = -l_depth` so that position 0 begins the second copy of `B_depth`.
#[derive(Clone, PartialEq, Eq)]
pub struct Window {
    depth: u32,
    start: i64,
    letters: Vec<u8>,
}

impl Window {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// First index covered (`-l_depth`).
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last index covered (`l_depth`).
    pub fn end(&self) -> i64 {
        self.start + self.letters.len() as i64
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, pos: i64) -> Option<u8> {
        if pos < self.start || pos >= self.end() {
            return None;
        }
        Some(self.letters[(pos - self.start) as usize])
    }

    /// Letters on `lo .. hi` (half-open), if covered.
    pub fn slice(&self, lo: i64, hi: i64) -> Option<&[u8]> {
        if lo < self.start || hi > self.end() || lo > hi {
            return None;
        }
        Some(&self.letters[(lo - self.start) as usize..(hi - self.start) as usize])
    }

    /// Longest word length for which occurrence in this window is equivalent
    /// to occurrence anywhere in `ω`.
    ///
    /// `ω` is a concatenation of copies of `B_{K-1}` separated by at most one
    /// spacer `1`, so a word of length at most `l_{K-1} + 1` meets at most two
    /// consecutive copies; both junction types `B_{K-1} B_{K-1}` and
    /// `B_{K-1} 1 B_{K-1}` occur inside `B_K`, which lies in the window.
    pub fn certified_word_len(&self) -> i64 {
        block_length_i64(self.depth - 1).expect("window depth is capped") + 1
    }
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("depth", &self.depth)
            .field("start", &self.start)
            .field("len", &self.letters.len())
            .finish()
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Window", 3)?;
        st.serialize_field("depth", &self.depth)?;
        st.serialize_field("start_index", &self.start)?;
        let text: String = self
            .letters
            .iter()
            .map(|&b| if b == 0 { '0' } else { '1' })
            .collect();
        st.serialize_field("letters", &text)?;
        st.end()
    }
}

pub fn window(depth: u32) -> Result<Window> {
    window_with_cap(depth, DEFAULT_DEPTH_CAP)
}

pub fn window_with_cap(depth: u32, cap: u32) -> Result<Window> {
    let block = chacon_block_with_cap(depth, cap)?;
    let l = block.len();
    let mut letters = Vec::with_capacity(2 * l);
    letters.extend_from_slice(block.letters());
    letters.extend_from_slice(block.letters());
    Ok(Window {
        depth,
        start: -(l as i64),
        letters,
    })
}

/// Every position `p` such that `pattern` occupies `p .. p + |pattern|`
/// entirely inside the window, ascending.
pub fn occurrences(pattern: &Block, w: &Window) -> Vec<i64> {
    occurrences_of(pattern.letters(), w)
}

pub(crate) fn occurrences_of(pattern: &[u8], w: &Window) -> Vec<i64> {
    if pattern.is_empty() || pattern.len() > w.len() {
        return Vec::new();
    }
    w.letters
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, s)| *s == pattern)
        .map(|(i, _)| w.start + i as i64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_occurrences(pattern: &[u8], w: &Window) -> Vec<i64> {
        let mut out = Vec::new();
        for p in w.start()..w.end() {
            let mut ok = true;
            for (i, &c) in pattern.iter().enumerate() {
                if w.get(p + i as i64) != Some(c) {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn first_blocks() {
        assert_eq!(chacon_block(1).unwrap().to_string(), "0010");
        assert_eq!(chacon_block(2).unwrap().to_string(), "0010001010010");
        let b2 = chacon_block(2).unwrap().to_string();
        let b3 = chacon_block(3).unwrap().to_string();
        assert_eq!(b3, format!("{b2}{b2}1{b2}"));
        assert_eq!(b3.len(), 40);
    }

    #[test]
    fn block_depth_errors() {
        assert_eq!(chacon_block(0), Err(Error::InvalidDepth(0)));
        assert_eq!(
            chacon_block(13),
            Err(Error::DepthExceedsCap { depth: 13, cap: 12 })
        );
        assert!(chacon_block_with_cap(13, 13).is_ok());
    }

    #[test]
    fn substitution_rule() {
        assert_eq!(substitute(&"0".parse().unwrap()).to_string(), "0010");
        assert_eq!(substitute(&"1".parse().unwrap()).to_string(), "1");
        for n in 1..=3 {
            let b = chacon_block(n).unwrap();
            assert_eq!(substitute(&b), chacon_block(n + 1).unwrap());
        }
    }

    #[test]
    fn lengths() {
        assert_eq!(block_length(1), BigInt::from(4));
        assert_eq!(block_length(2), BigInt::from(13));
        assert_eq!(block_length(3), BigInt::from(40));
        for n in 1..=DEFAULT_DEPTH_CAP {
            assert_eq!(
                chacon_block(n).unwrap().len() as i64,
                block_length_i64(n).unwrap()
            );
        }
        assert!(block_length_i64(38).is_ok());
        assert_eq!(block_length_i64(39), Err(Error::Overflow("3^e")));
    }

    #[test]
    fn parse_rejects_bad_letters() {
        assert_eq!("012".parse::<Block>(), Err(Error::InvalidLetter('2')));
        assert_eq!("".parse::<Block>(), Err(Error::EmptyWord));
    }

    #[test]
    fn window_layout() {
        let w1 = window(1).unwrap();
        assert_eq!(w1.start(), -4);
        assert_eq!(w1.end(), 4);
        assert_eq!(w1.letters(), &[0, 0, 1, 0, 0, 0, 1, 0]);
        let w2 = window(2).unwrap();
        assert_eq!(w2.len(), 26);
        assert_eq!(w2.slice(-4, 4).unwrap(), w1.letters());
    }

    #[test]
    fn windows_nest() {
        for k in 1..8 {
            let small = window(k).unwrap();
            let big = window(k + 1).unwrap();
            assert_eq!(
                big.slice(small.start(), small.end()).unwrap(),
                small.letters()
            );
        }
    }

    #[test]
    fn occurrence_examples() {
        let w2 = window(2).unwrap();
        let b1: Block = "0010".parse().unwrap();
        let occ = occurrences(&b1, &w2);
        for p in [-13, -9, 0, 4, 9] {
            assert!(occ.contains(&p), "missing {p} in {occ:?}");
        }
        assert!(occurrences(&"11".parse().unwrap(), &window(3).unwrap()).is_empty());
        let b2 = chacon_block(2).unwrap();
        assert_eq!(occurrences(&b2, &w2), vec![-13, 0]);
    }

    #[test]
    fn occurrences_match_naive_scan() {
        let w = window(4).unwrap();
        for pat in ["0", "1", "00", "010", "0010", "10010", "0001000"] {
            let p: Block = pat.parse().unwrap();
            assert_eq!(
                occurrences(&p, &w),
                naive_occurrences(p.letters(), &w),
                "{pat}"
            );
        }
    }

    #[test]
    fn no_double_one_up_to_cap() {
        let w = window(DEFAULT_DEPTH_CAP).unwrap();
        assert!(w.letters().windows(2).all(|s| s != [1, 1]));
    }

    #[test]
    fn window_json_shape() {
        let v = serde_json::to_value(window(1).unwrap()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"depth": 1, "start_index": -4, "letters": "00100010"})
        );
    }
}
