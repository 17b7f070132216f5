//! Per-frame wireless channel realizations and the subchannel rate model.
//!
//! A frame interval sees a single channel coefficient; every subchannel of
//! bandwidth `B_w` then carries `B_w * log2(1 + p*h^2 / (N_0*B_w))` bits/s.
//! Coefficients are either held fixed, drawn from Rayleigh block fading
//! (i.i.d. exponential linear SNR across frames), or replayed from a trace.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fading / sourcing mode for the channel generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    /// SNR pinned to `mean_snr_db` on every frame.
    Fixed,
    /// Rayleigh block fading: linear SNR = mean * Exp(1), i.i.d. per frame.
    Rayleigh,
    /// Replay samples loaded from a trace file.
    Trace,
}

/// Static link parameters shared by all frames.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Bandwidth of each subchannel in Hz (B_w).
    pub bandwidth_hz: f64,
    /// Transmission power per subchannel in Watts (p).
    pub power_w: f64,
    /// Noise power spectral density in W/Hz (N_0).
    pub noise_psd: f64,
    /// Mean SNR in dB; the per-frame operating point for fixed/rayleigh modes.
    pub mean_snr_db: f64,
    /// Maximum subchannels available per frame.
    pub n_max: usize,
    pub mode: ChannelMode,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            bandwidth_hz: 180e3,
            power_w: 0.2,
            noise_psd: 4.0039e-21, // thermal noise at 290 K
            mean_snr_db: 20.0,
            n_max: 10,
            mode: ChannelMode::Rayleigh,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::Config("bandwidth_hz must be > 0".into()));
        }
        if !(self.power_w > 0.0) {
            return Err(Error::Config("power_w must be > 0".into()));
        }
        if !(self.noise_psd > 0.0) {
            return Err(Error::Config("noise_psd must be > 0".into()));
        }
        Ok(())
    }

    /// Channel coefficient that realizes a given linear SNR under these params.
    pub fn coeff_for_snr(&self, snr_linear: f64) -> f64 {
        (snr_linear * self.noise_psd * self.bandwidth_hz / self.power_w).sqrt()
    }
}

/// One frame's channel realization. All fields are constant within the frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSample {
    pub frame_index: u64,
    /// Channel coefficient h_f (dimensionless).
    pub h: f64,
    /// Achievable rate per subchannel, bits/s.
    pub r_sc: f64,
    /// Subchannels available this frame.
    pub n_max: usize,
}

/// Shannon rate of one subchannel for coefficient `h`.
///
/// `B_w * log2(1 + p*h^2 / (N_0*B_w))`; strictly increasing in h, zero at h = 0.
pub fn subchannel_rate(h: f64, params: &ChannelParams) -> f64 {
    let snr = params.power_w * h * h / (params.noise_psd * params.bandwidth_hz);
    params.bandwidth_hz * (1.0 + snr).log2()
}

pub fn snr_db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn snr_linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Sequential source of per-frame channel samples.
///
/// A generator owns its RNG; two generators built from the same params and
/// seed emit bit-identical streams.
#[derive(Debug, Clone)]
pub struct ChannelGenerator {
    params: ChannelParams,
    rng: ChaCha8Rng,
    frame: u64,
    trace: Vec<ChannelSample>,
    trace_pos: usize,
    loop_trace: bool,
}

impl ChannelGenerator {
    pub fn new(params: ChannelParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0xC4A7);
        Self {
            params,
            rng,
            frame: 0,
            trace: Vec::new(),
            trace_pos: 0,
            loop_trace: false,
        }
    }

    /// Generator that replays `trace` in order. With `loop_trace` the replay
    /// wraps around instead of signalling exhaustion.
    pub fn from_trace(params: ChannelParams, trace: Vec<ChannelSample>, loop_trace: bool) -> Self {
        let mut gen = Self::new(
            ChannelParams {
                mode: ChannelMode::Trace,
                ..params
            },
            0,
        );
        gen.trace = trace;
        gen.loop_trace = loop_trace;
        gen
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Draw the next frame's realization.
    pub fn next_sample(&mut self) -> Result<ChannelSample> {
        let sample = match self.params.mode {
            ChannelMode::Fixed => {
                let snr = snr_db_to_linear(self.params.mean_snr_db);
                let h = self.params.coeff_for_snr(snr);
                ChannelSample {
                    frame_index: self.frame,
                    h,
                    r_sc: subchannel_rate(h, &self.params),
                    n_max: self.params.n_max,
                }
            }
            ChannelMode::Rayleigh => {
                // |h|^2 exponential under Rayleigh fading, so linear SNR is
                // mean * Exp(1) via inverse-CDF sampling.
                let u: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
                let x = -u.ln();
                let snr = snr_db_to_linear(self.params.mean_snr_db) * x;
                let h = self.params.coeff_for_snr(snr);
                ChannelSample {
                    frame_index: self.frame,
                    h,
                    r_sc: subchannel_rate(h, &self.params),
                    n_max: self.params.n_max,
                }
            }
            ChannelMode::Trace => {
                if self.trace.is_empty() {
                    return Err(Error::TraceExhausted { frames: 0 });
                }
                if self.trace_pos >= self.trace.len() {
                    if self.loop_trace {
                        self.trace_pos = 0;
                    } else {
                        return Err(Error::TraceExhausted {
                            frames: self.trace.len(),
                        });
                    }
                }
                let mut s = self.trace[self.trace_pos];
                self.trace_pos += 1;
                s.frame_index = self.frame;
                s
            }
        };
        self.frame += 1;
        Ok(sample)
    }
}

/// Parsed row of the trace schema `frame,n_max,snr_db[,rate_bps]`.
#[derive(Debug, Clone, Deserialize, Serialize)]
struct TraceRow {
    frame: u64,
    n_max: i64,
    snr_db: f64,
    rate_bps: Option<f64>,
}

/// Load a channel trace CSV.
///
/// Header `frame,n_max,snr_db[,rate_bps]`, one row per frame interval.
/// When `rate_bps` is present it overrides the Shannon-rate computation.
pub fn load_trace(path: &Path, params: &ChannelParams) -> Result<Vec<ChannelSample>> {
    let file = File::open(path)?;
    load_trace_reader(BufReader::new(file), params)
}

pub fn load_trace_reader<R: BufRead>(reader: R, params: &ChannelParams) -> Result<Vec<ChannelSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let mut samples = Vec::new();
    for (idx, record) in rdr.deserialize::<TraceRow>().enumerate() {
        let line = idx + 2; // 1-based, after the header line
        let row = record.map_err(|e| Error::TraceParse {
            line,
            message: e.to_string(),
        })?;
        if row.n_max < 0 {
            return Err(Error::TraceParse {
                line,
                message: format!("n_max must be non-negative, got {}", row.n_max),
            });
        }
        if let Some(r) = row.rate_bps {
            if r < 0.0 {
                return Err(Error::TraceParse {
                    line,
                    message: format!("rate_bps must be non-negative, got {}", r),
                });
            }
        }
        let snr = snr_db_to_linear(row.snr_db);
        let h = params.coeff_for_snr(snr);
        let r_sc = match row.rate_bps {
            Some(r) => r,
            None => subchannel_rate(h, params),
        };
        samples.push(ChannelSample {
            frame_index: row.frame,
            h,
            r_sc,
            n_max: row.n_max as usize,
        });
    }
    Ok(samples)
}

/// Write samples in the trace schema, always including the `rate_bps` column
/// so that a reload reproduces `r_sc` bit-exactly.
pub fn save_trace(path: &Path, samples: &[ChannelSample], params: &ChannelParams) -> Result<()> {
    let mut file = File::create(path)?;
    writeln!(file, "frame,n_max,snr_db,rate_bps")?;
    for s in samples {
        let snr = params.power_w * s.h * s.h / (params.noise_psd * params.bandwidth_hz);
        writeln!(
            file,
            "{},{},{},{}",
            s.frame_index,
            s.n_max,
            snr_linear_to_db(snr),
            s.r_sc
        )?;
    }
    Ok(())
}
