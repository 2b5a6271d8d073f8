//! Empty rectangles on the grid torus.

use crate::grid::{GridDiagram, Marker};

/// An empty rectangle out of a state `x`, with lower-left corner
/// `(left, σ(left))` and upper-right corner `(right, σ(right))`. It spans
/// `width` columns and `height` rows, both measured cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rectangle {
    pub left: u8,
    pub right: u8,
    pub bottom: u8,
    pub width: u8,
    pub height: u8,
    pub o_count: u16,
    pub x_count: u16,
}

impl Rectangle {
    /// Whether the square `(row, col)` lies inside the rectangle.
    pub fn contains_square(&self, n: usize, row: usize, col: usize) -> bool {
        let dc = (col + n - self.left as usize) % n;
        let dr = (row + n - self.bottom as usize) % n;
        dc < self.width as usize && dr < self.height as usize
    }

    /// Writes the target state `y` into `out`.
    pub fn apply(&self, sigma: &[u8], out: &mut [u8]) {
        out.copy_from_slice(sigma);
        out.swap(self.left as usize, self.right as usize);
    }
}

/// Counts markings in cyclic rectangles by 2D prefix sums over the doubled torus.
#[derive(Debug, Clone)]
pub struct MarkingCounter {
    n: usize,
    stride: usize,
    x: Vec<u16>,
    o: Vec<u16>,
}

impl MarkingCounter {
    pub fn new(d: &GridDiagram) -> Self {
        let n = d.n();
        let stride = 2 * n + 1;
        let table = |m: Marker| {
            let cols = d.cols(m);
            let mut t = vec![0u16; stride * stride];
            for r in 0..2 * n {
                for c in 0..2 * n {
                    let here = (cols[r % n] == c % n) as u16;
                    t[(r + 1) * stride + c + 1] =
                        here + t[r * stride + c + 1] + t[(r + 1) * stride + c] - t[r * stride + c];
                }
            }
            t
        };
        MarkingCounter { n, stride, x: table(Marker::X), o: table(Marker::O) }
    }

    #[inline]
    fn sum(&self, t: &[u16], col: usize, width: usize, row: usize, height: usize) -> u16 {
        let s = self.stride;
        let (c1, r1) = (col + width, row + height);
        t[r1 * s + c1] + t[row * s + col] - t[row * s + c1] - t[r1 * s + col]
    }

    /// `(o_count, x_count)` of the cyclic rectangle.
    #[inline]
    pub fn count(&self, col: usize, width: usize, row: usize, height: usize) -> (u16, u16) {
        (self.sum(&self.o, col, width, row, height), self.sum(&self.x, col, width, row, height))
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Calls `f` for every empty rectangle out of `sigma`.
///
/// For each left corner column the sweep keeps the lowest state point seen
/// so far above the corner row; a candidate right corner is empty exactly
/// when it lies below all of them.
#[inline]
pub fn for_each_empty_rect(sigma: &[u8], counter: &MarkingCounter, mut f: impl FnMut(Rectangle)) {
    let n = sigma.len();
    for i in 0..n {
        let base = sigma[i] as usize;
        let mut lowest = n;
        for w in 1..n {
            let j = if i + w >= n { i + w - n } else { i + w };
            let v = sigma[j] as usize;
            let h = if v >= base { v - base } else { v + n - base };
            if h < lowest {
                let (o_count, x_count) = counter.count(i, w, base, h);
                f(Rectangle {
                    left: i as u8,
                    right: j as u8,
                    bottom: base as u8,
                    width: w as u8,
                    height: h as u8,
                    o_count,
                    x_count,
                });
                lowest = h;
            }
        }
    }
}

/// Slow reference: every rectangle checked point by point.
pub fn empty_rects_naive(d: &GridDiagram, sigma: &[u8]) -> Vec<Rectangle> {
    let n = d.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = (j + n - i) % n;
            let base = sigma[i] as usize;
            let h = (sigma[j] as usize + n - base) % n;
            let inside_pt = |c: usize, r: usize| {
                let dc = (c + n - i) % n;
                let dr = (r + n - base) % n;
                dc > 0 && dc < w && dr > 0 && dr < h
            };
            if (0..n).any(|c| inside_pt(c, sigma[c] as usize)) {
                continue;
            }
            let mut rect = Rectangle {
                left: i as u8,
                right: j as u8,
                bottom: base as u8,
                width: w as u8,
                height: h as u8,
                o_count: 0,
                x_count: 0,
            };
            for r in 0..n {
                if rect.contains_square(n, r, d.o_cols()[r]) {
                    rect.o_count += 1;
                }
                if rect.contains_square(n, r, d.x_cols()[r]) {
                    rect.x_count += 1;
                }
            }
            out.push(rect);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{factorial, lehmer_unrank};

    #[test]
    fn sweep_matches_naive() {
        let d = GridDiagram::torus(5, 2).unwrap();
        let counter = MarkingCounter::new(&d);
        let mut total = 0;
        for r in 0..factorial(5) {
            let s = lehmer_unrank(5, r);
            let mut fast = Vec::new();
            for_each_empty_rect(&s, &counter, |rc| fast.push(rc));
            let mut slow = empty_rects_naive(&d, &s);
            fast.sort_by_key(|r| (r.left, r.right));
            slow.sort_by_key(|r| (r.left, r.right));
            assert_eq!(fast, slow);
            assert!(fast.len() <= 20);
            total += fast.len();
        }
        assert!(total > 0);
    }

    #[test]
    fn unknot_rectangles() {
        let d = GridDiagram::unknot();
        let counter = MarkingCounter::new(&d);
        let mut rects = Vec::new();
        for_each_empty_rect(&[0, 1], &counter, |r| rects.push(r));
        assert_eq!(rects.len(), 2);
        for r in rects {
            assert!(r.o_count <= 1 && r.x_count <= 1);
            assert_eq!(r.o_count + r.x_count, 1);
        }
    }
}
