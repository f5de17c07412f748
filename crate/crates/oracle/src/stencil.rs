/// Weights of a plus-shaped 2D stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Plus {
    pub center: f64,
    pub up: f64,
    pub left: f64,
    pub right: f64,
    pub down: f64,
}

/// Where the stencil is evaluated and how far its arms reach.
///
/// `stride = 1` evaluates every pixel. `stride = 2` evaluates only pixels
/// with `(row + col) % 2 == phase` (the checkerboard class). `dilation` is
/// the arm length in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StencilLayout {
    pub stride: usize,
    pub phase: usize,
    pub dilation: usize,
}

impl Default for StencilLayout {
    fn default() -> Self {
        StencilLayout { stride: 1, phase: 0, dilation: 1 }
    }
}

/// Direct nested-loop plus-stencil cross-correlation with zero padding.
///
/// `image` is row-major `h × w`. Pixels off the output lattice are `None`.
pub fn oracle_2d_stencil(
    image: &[f64],
    h: usize,
    w: usize,
    weights: &Plus,
    bias: f64,
    layout: StencilLayout,
) -> Vec<Option<f64>> {
    assert_eq!(image.len(), h * w);
    assert!(layout.stride == 1 || layout.stride == 2, "stride must be 1 or 2");
    let at = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= h as isize || j >= w as isize {
            0.0
        } else {
            image[i as usize * w + j as usize]
        }
    };
    let d = layout.dilation as isize;
    let mut out = vec![None; h * w];
    for i in 0..h {
        for j in 0..w {
            if layout.stride == 2 && (i + j) % 2 != layout.phase {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let y = weights.center * at(ii, jj)
                + weights.up * at(ii - d, jj)
                + weights.left * at(ii, jj - d)
                + weights.right * at(ii, jj + d)
                + weights.down * at(ii + d, jj)
                + bias;
            out[i * w + j] = Some(y);
        }
    }
    out
}

/// Shift an image by `(dy, dx)` pixels: `out[i+dy][j+dx] = image[i][j]`,
/// vacated pixels receive `fill`.
pub fn oracle_grid_shift(image: &[f64], h: usize, w: usize, dy: isize, dx: isize, fill: f64) -> Vec<f64> {
    assert_eq!(image.len(), h * w);
    let mut out = vec![fill; h * w];
    for i in 0..h as isize {
        for j in 0..w as isize {
            let (ti, tj) = (i + dy, j + dx);
            if ti >= 0 && tj >= 0 && ti < h as isize && tj < w as isize {
                out[ti as usize * w + tj as usize] = image[i as usize * w + j as usize];
            }
        }
    }
    out
}
