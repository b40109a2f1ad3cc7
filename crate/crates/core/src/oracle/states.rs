// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Colorings up to relabelling of colors.
//!
//! Every process in this crate treats the palette symmetrically, so the
//! expected remaining work from a coloring only depends on which vertices
//! share a color. Colorings are canonicalized by renaming colors in order of
//! first appearance (a restricted growth string), which shrinks the state
//! space by up to a factor of D!.

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};

/// Upper bound on Dⁿ accepted by the enumerating oracles.
pub const MAX_RAW_STATES: u128 = 2_000_000;

pub(crate) fn check_raw_states(n: usize, palette: Color) -> Result<()> {
    if palette > 255 {
        return Err(Error::Unsupported(format!(
            "oracles support palettes of at most 255 colors, got {palette}"
        )));
    }
    let size = (palette as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_RAW_STATES {
        return Err(Error::GuardExceeded {
            what: "D^n",
            size,
            limit: MAX_RAW_STATES,
        });
    }
    Ok(())
}

/// Canonical key of a coloring: colors renamed by first appearance, then read
/// as base-D digits (vertex 0 least significant).
pub(crate) fn canonical_key(colors: &[Color], palette: Color) -> u64 {
    let mut rename = [u8::MAX; 256];
    let mut next = 0u8;
    let mut key = 0u64;
    let mut scale = 1u64;
    for &c in colors {
        let slot = &mut rename[c as usize];
        if *slot == u8::MAX {
            *slot = next;
            next += 1;
        }
        key += u64::from(*slot) * scale;
        scale *= u64::from(palette);
    }
    key
}

pub(crate) fn decode_key(mut key: u64, n: usize, palette: Color) -> Vec<Color> {
    (0..n)
        .map(|_| {
            let digit = key % u64::from(palette);
            key /= u64::from(palette);
            digit as Color + 1
        })
        .collect()
}

/// All canonical colorings of `n` vertices with at most `palette` colors,
/// each paired with the number of raw colorings it stands for,
/// `D · (D−1) ··· (D−k+1)` when `k` colors are used.
pub(crate) fn canonical_classes(n: usize, palette: Color) -> Vec<(Vec<Color>, u64)> {
    fn extend(
        prefix: &mut Vec<Color>,
        used: Color,
        n: usize,
        palette: Color,
        out: &mut Vec<(Vec<Color>, u64)>,
    ) {
        if prefix.len() == n {
            let weight = (0..used).map(|i| u64::from(palette - i)).product();
            out.push((prefix.clone(), weight));
            return;
        }
        for c in 1..=(used + 1).min(palette) {
            prefix.push(c);
            extend(prefix, used.max(c), n, palette, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), 0, n, palette, &mut out);
    out
}

pub(crate) fn coloring_of(colors: Vec<Color>, palette: Color) -> Coloring {
    Coloring::new(colors, palette).expect("decoded colors are within the palette")
}
