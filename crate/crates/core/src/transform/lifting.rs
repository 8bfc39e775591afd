//! One-dimensional 5/3 lifting passes with whole-sample symmetric extension.
//!
//! Index `-i` mirrors to `i` and `l - 1 + i` mirrors to `l - 1 - i`. A
//! segment of length 1 is left alone by every pass and its sample counts as
//! low-pass.

use crate::CostCounters;

#[inline]
fn predict_delta(left: i32, right: i32) -> i32 {
    left.wrapping_add(right) >> 1
}

#[inline]
fn update_delta(left: i32, right: i32) -> i32 {
    left.wrapping_add(right).wrapping_add(2) >> 2
}

/// `s[x] -= floor((s[x-1] + s[x+1]) / 2)` for odd `x`.
pub fn predict_pass(s: &mut [i32], counters: &mut CostCounters) {
    let l = s.len();
    if l < 2 {
        return;
    }
    let mut x = 1;
    while x < l {
        let right = if x + 1 < l { s[x + 1] } else { s[x - 1] };
        s[x] = s[x].wrapping_sub(predict_delta(s[x - 1], right));
        x += 2;
    }
    counters.lifting_steps += (l / 2) as u64;
}

pub fn unpredict_pass(s: &mut [i32]) {
    let l = s.len();
    if l < 2 {
        return;
    }
    let mut x = 1;
    while x < l {
        let right = if x + 1 < l { s[x + 1] } else { s[x - 1] };
        s[x] = s[x].wrapping_add(predict_delta(s[x - 1], right));
        x += 2;
    }
}

/// `s[x] += floor((s[x-1] + s[x+1] + 2) / 4)` for even `x`.
pub fn update_pass(s: &mut [i32], counters: &mut CostCounters) {
    let l = s.len();
    if l < 2 {
        return;
    }
    let mut x = 0;
    while x < l {
        let left = if x > 0 { s[x - 1] } else { s[1] };
        let right = if x + 1 < l { s[x + 1] } else { s[x - 1] };
        s[x] = s[x].wrapping_add(update_delta(left, right));
        x += 2;
    }
    counters.lifting_steps += l.div_ceil(2) as u64;
}

pub fn unupdate_pass(s: &mut [i32]) {
    let l = s.len();
    if l < 2 {
        return;
    }
    let mut x = 0;
    while x < l {
        let left = if x > 0 { s[x - 1] } else { s[1] };
        let right = if x + 1 < l { s[x + 1] } else { s[x - 1] };
        s[x] = s[x].wrapping_sub(update_delta(left, right));
        x += 2;
    }
}

/// Moves even-index samples to the front and odd-index samples behind them,
/// both in order.
pub fn reorder_pass(s: &mut [i32]) {
    if s.len() < 3 {
        return;
    }
    let tmp = s.to_vec();
    let half = s.len().div_ceil(2);
    let (low, high) = s.split_at_mut(half);
    for (dst, src) in low.iter_mut().zip(tmp.iter().step_by(2)) {
        *dst = *src;
    }
    for (dst, src) in high.iter_mut().zip(tmp.iter().skip(1).step_by(2)) {
        *dst = *src;
    }
}

pub fn unreorder_pass(s: &mut [i32]) {
    if s.len() < 3 {
        return;
    }
    let tmp = s.to_vec();
    let half = s.len().div_ceil(2);
    for (i, v) in tmp[..half].iter().enumerate() {
        s[2 * i] = *v;
    }
    for (i, v) in tmp[half..].iter().enumerate() {
        s[2 * i + 1] = *v;
    }
}

// Column variants operate on the top-left `w × h` rectangle of a row-major
// buffer with row stride `stride`, treating each column as a segment.

#[inline]
fn row_pair_mut(buf: &mut [i32], stride: usize, a: usize, b: usize) -> (&mut [i32], &[i32]) {
    debug_assert!(a != b);
    if a < b {
        let (head, tail) = buf.split_at_mut(b * stride);
        (&mut head[a * stride..], &tail[..])
    } else {
        let (head, tail) = buf.split_at_mut(a * stride);
        (&mut tail[..], &head[b * stride..])
    }
}

fn lift_columns(
    buf: &mut [i32],
    stride: usize,
    w: usize,
    h: usize,
    start: usize,
    op: impl Fn(i32, i32, i32) -> i32,
) {
    let mut y = start;
    while y < h {
        let above = if y > 0 { y - 1 } else { 1 };
        let below = if y + 1 < h { y + 1 } else { y - 1 };
        if above == below {
            let (row, nb) = row_pair_mut(buf, stride, y, above);
            for x in 0..w {
                row[x] = op(row[x], nb[x], nb[x]);
            }
        } else {
            // neighbours straddle y: split so the target row is mutable
            let (head, tail) = buf.split_at_mut(y * stride);
            let (row, rest) = tail.split_at_mut(stride);
            let up = &head[above * stride..above * stride + w];
            let down = &rest[(below - y - 1) * stride..(below - y - 1) * stride + w];
            for x in 0..w {
                row[x] = op(row[x], up[x], down[x]);
            }
        }
        y += 2;
    }
}

pub fn predict_columns(
    buf: &mut [i32],
    stride: usize,
    w: usize,
    h: usize,
    counters: &mut CostCounters,
) {
    if h < 2 {
        return;
    }
    lift_columns(buf, stride, w, h, 1, |s, a, b| {
        s.wrapping_sub(predict_delta(a, b))
    });
    counters.lifting_steps += (w * (h / 2)) as u64;
}

pub fn unpredict_columns(buf: &mut [i32], stride: usize, w: usize, h: usize) {
    if h < 2 {
        return;
    }
    lift_columns(buf, stride, w, h, 1, |s, a, b| {
        s.wrapping_add(predict_delta(a, b))
    });
}

pub fn update_columns(
    buf: &mut [i32],
    stride: usize,
    w: usize,
    h: usize,
    counters: &mut CostCounters,
) {
    if h < 2 {
        return;
    }
    lift_columns(buf, stride, w, h, 0, |s, a, b| {
        s.wrapping_add(update_delta(a, b))
    });
    counters.lifting_steps += (w * h.div_ceil(2)) as u64;
}

pub fn unupdate_columns(buf: &mut [i32], stride: usize, w: usize, h: usize) {
    if h < 2 {
        return;
    }
    lift_columns(buf, stride, w, h, 0, |s, a, b| {
        s.wrapping_sub(update_delta(a, b))
    });
}

pub fn reorder_columns(buf: &mut [i32], stride: usize, w: usize, h: usize) {
    if h < 3 {
        return;
    }
    let tmp: Vec<i32> = (0..h)
        .flat_map(|y| buf[y * stride..y * stride + w].iter().copied())
        .collect();
    let half = h.div_ceil(2);
    for y in 0..h {
        let src = if y < half { 2 * y } else { 2 * (y - half) + 1 };
        buf[y * stride..y * stride + w].copy_from_slice(&tmp[src * w..(src + 1) * w]);
    }
}

pub fn unreorder_columns(buf: &mut [i32], stride: usize, w: usize, h: usize) {
    if h < 3 {
        return;
    }
    let tmp: Vec<i32> = (0..h)
        .flat_map(|y| buf[y * stride..y * stride + w].iter().copied())
        .collect();
    let half = h.div_ceil(2);
    for y in 0..h {
        let dst = if y < half { 2 * y } else { 2 * (y - half) + 1 };
        buf[dst * stride..dst * stride + w].copy_from_slice(&tmp[y * w..(y + 1) * w]);
    }
}
