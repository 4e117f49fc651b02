use super::{sc_decode, LlrFrame, PolarCodeSpec, SclDecoder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl { list_size: usize },
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl { .. } => "scl",
        }
    }

    pub fn list_size(&self) -> usize {
        match self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl { list_size } => *list_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub payload: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub crc_ok: bool,
}

/// SC or SCL decoder that keeps list buffers alive between frames.
#[derive(Debug, Clone)]
pub struct PolarDecoder {
    kind: DecoderKind,
    scl: Vec<SclDecoder>,
}

impl PolarDecoder {
    pub fn new(kind: DecoderKind) -> Self {
        PolarDecoder {
            kind,
            scl: Vec::new(),
        }
    }

    pub fn kind(&self) -> DecoderKind {
        self.kind
    }

    pub fn decode(&mut self, llrs: &LlrFrame, spec: &PolarCodeSpec) -> Decoded {
        match self.kind {
            DecoderKind::Sc => {
                let out = sc_decode(llrs, spec);
                Decoded {
                    payload: out.payload,
                    u_hat: out.u_hat,
                    crc_ok: out.crc_ok,
                }
            }
            DecoderKind::Scl { list_size } => {
                let n = spec.n_code();
                let pos = match self.scl.iter().position(|d| d.n_code() == n) {
                    Some(p) => p,
                    None => {
                        self.scl.push(SclDecoder::new(n, list_size));
                        self.scl.len() - 1
                    }
                };
                let out = self.scl[pos].decode(llrs, spec);
                Decoded {
                    payload: out.payload,
                    u_hat: out.u_hat,
                    crc_ok: out.crc_ok,
                }
            }
        }
    }
}
