// Copyright 2026 The wflsa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! 8-bit PGM (P2 / P5) reading and writing.

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Read, Write};
use std::path::Path;

use image::codecs::pnm::{PnmDecoder, PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageDecoder, ImageEncoder};

use super::GrayImage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmEncoding {
    /// P2
    Ascii,
    /// P5
    #[default]
    Binary,
}

fn invalid(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::InvalidImage(format!("{}: {msg}", path.display()))
}

/// Reads a P2 or P5 graymap with maxval 255 and scales it to `[0, 1]`.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_end(&mut bytes))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    decode_pgm(&bytes, path)
}

pub(crate) fn decode_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let decoder = PnmDecoder::new(Cursor::new(bytes)).map_err(|e| invalid(path, e))?;
    let header = decoder.header();
    match header.subtype() {
        PnmSubtype::Graymap(_) => {}
        other => {
            return Err(invalid(
                path,
                format!("expected a P2/P5 graymap, found {other:?}"),
            ))
        }
    }
    if header.maximal_sample() != 255 {
        return Err(invalid(
            path,
            format!("maxval must be 255, found {}", header.maximal_sample()),
        ));
    }
    let (w, h) = (header.width() as usize, header.height() as usize);
    let mut buf = vec![0u8; decoder.total_bytes() as usize];
    decoder.read_image(&mut buf).map_err(|e| invalid(path, e))?;
    GrayImage::from_u8(h, w, &buf)
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage, encoding: PgmEncoding) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let bytes = encode_pgm(img, encoding)?;
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    out.write_all(&bytes).map_err(io_err)?;
    out.flush().map_err(io_err)
}

pub(crate) fn encode_pgm(img: &GrayImage, encoding: PgmEncoding) -> Result<Vec<u8>> {
    let sample = match encoding {
        PgmEncoding::Ascii => SampleEncoding::Ascii,
        PgmEncoding::Binary => SampleEncoding::Binary,
    };
    let mut bytes = Vec::new();
    PnmEncoder::new(&mut bytes)
        .with_subtype(PnmSubtype::Graymap(sample))
        .write_image(
            &img.to_u8(),
            img.width() as u32,
            img.height() as u32,
            ExtendedColorType::L8,
        )
        .map_err(|e| Error::InvalidImage(e.to_string()))?;
    Ok(bytes)
}
