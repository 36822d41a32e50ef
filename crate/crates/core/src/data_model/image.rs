use std::fs;
use std::io::Cursor;
use std::path::Path;

use crate::error::{HtgError, Result};

/// Single-channel image with pixel values in `[0, max_intensity]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
    max_intensity: f64,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>, max_intensity: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(HtgError::ShapeError(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(HtgError::ShapeError(format!(
                "{}x{} image needs {} pixels, got {}",
                width,
                height,
                width * height,
                pixels.len()
            )));
        }
        if !(max_intensity.is_finite() && max_intensity > 0.0) {
            return Err(HtgError::InvalidArgument(format!(
                "bad max intensity {max_intensity}"
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=max_intensity).contains(*p)) {
            return Err(HtgError::InvalidArgument(format!(
                "pixel value {p} outside [0, {max_intensity}]"
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
            max_intensity,
        })
    }

    /// 8-bit image (`max_intensity` = 255).
    pub fn from_u8(width: usize, height: usize, pixels: &[u8]) -> Result<Self> {
        GrayImage::new(
            width,
            height,
            pixels.iter().map(|&p| f64::from(p)).collect(),
            255.0,
        )
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        GrayImage::new(width, height, vec![value; width * height], 255.0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn max_intensity(&self) -> f64 {
        self.max_intensity
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Encodes as an 8-bit (or 16-bit when `max_intensity > 255`) grayscale
    /// PNG. Pixel values are rounded to the nearest integer.
    pub fn to_png(&self) -> Result<Vec<u8>> {
        let wide = self.max_intensity > 255.0;
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(if wide {
                png::BitDepth::Sixteen
            } else {
                png::BitDepth::Eight
            });
            let mut w = enc
                .write_header()
                .map_err(|e| HtgError::FormatError(format!("png header: {e}")))?;
            let data: Vec<u8> = if wide {
                self.pixels
                    .iter()
                    .flat_map(|&p| (p.round().min(65535.0) as u16).to_be_bytes())
                    .collect()
            } else {
                self.pixels
                    .iter()
                    .map(|&p| p.round().min(255.0) as u8)
                    .collect()
            };
            w.write_image_data(&data)
                .map_err(|e| HtgError::FormatError(format!("png data: {e}")))?;
        }
        Ok(out)
    }

    /// Decodes a PNG. Grayscale images are taken as is; color images are
    /// converted with the ITU-R BT.601 luma weights; alpha is ignored.
    pub fn from_png(bytes: &[u8]) -> Result<Self> {
        let mut dec = png::Decoder::new(Cursor::new(bytes));
        dec.set_transformations(png::Transformations::EXPAND);
        let mut reader = dec
            .read_info()
            .map_err(|e| HtgError::FormatError(format!("png: {e}")))?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| HtgError::FormatError("png too large".into()))?;
        let mut buf = vec![0u8; size];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| HtgError::FormatError(format!("png: {e}")))?;
        let (width, height) = (info.width as usize, info.height as usize);
        let (samples, max_intensity): (Vec<f64>, f64) = match info.bit_depth {
            png::BitDepth::Eight => (
                buf[..info.buffer_size()]
                    .iter()
                    .map(|&b| f64::from(b))
                    .collect(),
                255.0,
            ),
            png::BitDepth::Sixteen => (
                buf[..info.buffer_size()]
                    .chunks_exact(2)
                    .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])))
                    .collect(),
                65535.0,
            ),
            other => {
                return Err(HtgError::FormatError(format!(
                    "unsupported bit depth {other:?}"
                )))
            }
        };
        let channels = info.color_type.samples();
        let pixels: Vec<f64> = match info.color_type {
            png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => {
                samples.chunks_exact(channels).map(|c| c[0]).collect()
            }
            png::ColorType::Rgb | png::ColorType::Rgba => samples
                .chunks_exact(channels)
                .map(|c| bt601_luma(c[0], c[1], c[2]))
                .collect(),
            png::ColorType::Indexed => {
                return Err(HtgError::FormatError(
                    "palette image was not expanded".into(),
                ))
            }
        };
        GrayImage::new(width, height, pixels, max_intensity)
    }
}

pub fn bt601_luma(r: f64, g: f64, b: f64) -> f64 {
    0.299 * r + 0.587 * g + 0.114 * b
}

pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    GrayImage::from_png(&fs::read(path).map_err(|e| HtgError::io(path, e))?)
}

pub fn save_image(path: impl AsRef<Path>, image: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, image.to_png()?).map_err(|e| HtgError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip_8_bit() {
        let img = GrayImage::from_u8(3, 2, &[0, 10, 255, 128, 7, 1]).unwrap();
        let back = GrayImage::from_png(&img.to_png().unwrap()).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn png_round_trip_16_bit() {
        let img = GrayImage::new(2, 2, vec![0.0, 300.0, 65535.0, 4096.0], 65535.0).unwrap();
        let back = GrayImage::from_png(&img.to_png().unwrap()).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn rgb_is_converted_to_luma() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 2, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[255, 0, 0, 10, 20, 30]).unwrap();
        }
        let img = GrayImage::from_png(&out).unwrap();
        assert!((img.get(0, 0) - 0.299 * 255.0).abs() < 1e-12);
        assert!((img.get(1, 0) - (2.99 + 11.74 + 3.42)).abs() < 1e-9);
    }

    #[test]
    fn invalid_images() {
        assert!(GrayImage::new(0, 1, vec![], 255.0).is_err());
        assert!(GrayImage::new(2, 1, vec![1.0], 255.0).is_err());
        assert!(GrayImage::new(1, 1, vec![256.0], 255.0).is_err());
        assert!(GrayImage::from_png(b"not a png").is_err());
    }
}
