//! Mono 16-bit PCM WAV input for the MFCC front-end.

use std::io::{Read, Seek, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mfcc::AudioBuffer;

fn wav_err(e: hound::Error) -> Error {
    Error::Wav(e.to_string())
}

/// Reads RIFF/WAVE, PCM 16-bit signed, mono. Samples are scaled by 1/32768.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_wav_from(std::io::BufReader::new(file))
}

pub fn read_wav_from<R: Read>(reader: R) -> Result<AudioBuffer> {
    let mut rdr = hound::WavReader::new(reader).map_err(wav_err)?;
    let spec = rdr.spec();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(Error::Wav(format!(
            "unsupported encoding: {:?} {}-bit (need 16-bit PCM)",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    if spec.channels != 1 {
        return Err(Error::Wav(format!(
            "unsupported channel count {} (need mono)",
            spec.channels
        )));
    }
    let samples = rdr
        .samples::<i16>()
        .map(|s| s.map(|v| f64::from(v) / 32768.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(wav_err)?;
    if samples.is_empty() {
        return Err(Error::Wav("no audio samples".to_string()));
    }
    AudioBuffer::new(samples, spec.sample_rate)
}

/// Writes mono 16-bit PCM, clipping to the representable range.
pub fn write_wav_to<W: Write + Seek>(writer: W, a: &AudioBuffer) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: a.sample_rate(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::new(writer, spec).map_err(wav_err)?;
    for &v in a.samples() {
        let q = (v * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_sample(q).map_err(wav_err)?;
    }
    w.finalize().map_err(wav_err)
}

pub fn write_wav(path: impl AsRef<Path>, a: &AudioBuffer) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_wav_to(std::io::BufWriter::new(file), a)
}
