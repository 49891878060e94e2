//! Reference gate interpreters over the bit-exact program format.
//!
//! Program layout: a 3-bit register-width field (`w = field + 1 ∈ 1..=8`),
//! then 3-bit opcodes with 3-bit qubit operands. The stream ends at the
//! explicit HALT opcode — after which further bits are forbidden — or at
//! end-of-bits, which acts as an implicit halt. Qubit 0 is the most
//! significant position of the register.
//!
//! Interpreter A's opcode table is below; interpreter B decodes opcode `k`
//! as A's opcode `7-k`. A alone treats the fixed 6-bit prefix `101101` as
//! an emulation escape: the remaining bits are decoded as a complete
//! B-program, which is what keeps minimal lengths under A within a
//! constant of those under B.
//!
//! Programs are classical bit strings, not qubit strings: an exhaustive
//! search needs a countable, enumerable program space. Lower bounds by
//! counting are unaffected; quantum upper bounds are realized by gate
//! synthesis from the discrete set below.

use crate::error::{QkcError, Result};
use crate::matrix::C64;
use crate::state::PureState;

use super::program::{BitReader, BitString, InterpreterId, Program};

/// Bits of the A-side escape that re-decodes the remainder as a B-program;
/// the additive constant in cross-interpreter length comparisons.
pub const EMULATION_PREFIX: [bool; 6] = [true, false, true, true, false, true];
/// Length of [`EMULATION_PREFIX`] in bits.
pub const EMULATION_COST_BITS: u32 = EMULATION_PREFIX.len() as u32;

/// Widest register a program may declare.
pub const MAX_REGISTER_QUBITS: usize = 8;
/// Widest auxiliary input accepted, in qubits.
pub const MAX_AUX_QUBITS: usize = 4;

/// Reg/aux purity gap above which the output is refused as entangled.
const ENTANGLEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Opcode {
    Halt,
    H,
    T,
    S,
    X,
    Cnot,
    CopyAux,
    Literal,
}

/// Interpreter A's table, indexed by the 3-bit opcode.
const TABLE_A: [Opcode; 8] = [
    Opcode::Halt,
    Opcode::H,
    Opcode::T,
    Opcode::S,
    Opcode::X,
    Opcode::Cnot,
    Opcode::CopyAux,
    Opcode::Literal,
];

fn opcode(table: InterpreterId, code: u16) -> Opcode {
    match table {
        InterpreterId::A => TABLE_A[code as usize],
        InterpreterId::B => TABLE_A[7 - code as usize],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Instr {
    H(u8),
    T(u8),
    S(u8),
    X(u8),
    Cnot(u8, u8),
    CopyAux,
    /// X-mask over qubits `0..len`; the first payload bit lands on qubit 0.
    Literal {
        len: u8,
        mask: u8,
    },
}

impl Instr {
    /// True when the semantics stay within deterministic bit flips.
    pub fn is_classical(&self) -> bool {
        !matches!(self, Instr::H(_) | Instr::T(_) | Instr::S(_))
    }
}

/// A fully validated program body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedProgram {
    pub width: u8,
    pub instrs: Vec<Instr>,
}

impl DecodedProgram {
    pub fn is_classical(&self) -> bool {
        self.instrs.iter().all(Instr::is_classical)
    }
}

pub fn decode(bits: &BitString, interpreter: InterpreterId) -> Result<DecodedProgram> {
    if interpreter == InterpreterId::A
        && bits.len() >= EMULATION_PREFIX.len()
        && EMULATION_PREFIX.iter().enumerate().all(|(i, &b)| bits.get(i) == b)
    {
        let mut rest = BitString::new();
        for i in EMULATION_PREFIX.len()..bits.len() {
            rest.push(bits.get(i));
        }
        return decode(&rest, InterpreterId::B);
    }

    let mut r = BitReader::new(bits);
    let width = match r.read(3) {
        Some(v) => v as u8 + 1,
        None => return Err(QkcError::Malformed("missing width field".into())),
    };
    let mut instrs = Vec::new();
    loop {
        let code = match r.read(3) {
            Some(c) => c,
            None => {
                if r.remaining() > 0 {
                    return Err(QkcError::Malformed("truncated opcode".into()));
                }
                break; // end-of-bits: implicit halt
            }
        };
        let qubit = |r: &mut BitReader| -> Result<u8> {
            let q = r.read(3).ok_or_else(|| QkcError::Malformed("truncated operand".into()))?;
            if q as u8 >= width {
                return Err(QkcError::WidthExceeded(format!(
                    "qubit {} outside width-{} register",
                    q, width
                )));
            }
            Ok(q as u8)
        };
        match opcode(interpreter, code) {
            Opcode::Halt => {
                if r.remaining() > 0 {
                    return Err(QkcError::Malformed("trailing bits after halt".into()));
                }
                break;
            }
            Opcode::H => instrs.push(Instr::H(qubit(&mut r)?)),
            Opcode::T => instrs.push(Instr::T(qubit(&mut r)?)),
            Opcode::S => instrs.push(Instr::S(qubit(&mut r)?)),
            Opcode::X => instrs.push(Instr::X(qubit(&mut r)?)),
            Opcode::Cnot => {
                let control = qubit(&mut r)?;
                let target = qubit(&mut r)?;
                if control == target {
                    return Err(QkcError::Malformed("coincident control and target".into()));
                }
                instrs.push(Instr::Cnot(control, target));
            }
            Opcode::CopyAux => instrs.push(Instr::CopyAux),
            Opcode::Literal => {
                let len = r
                    .read(3)
                    .ok_or_else(|| QkcError::Malformed("truncated literal length".into()))?
                    as u8
                    + 1;
                if len > width {
                    return Err(QkcError::WidthExceeded(format!(
                        "literal of {} bits in width-{} register",
                        len, width
                    )));
                }
                let mask = r.read(len as usize).ok_or_else(|| {
                    QkcError::Malformed("truncated literal payload".into())
                })? as u8;
                instrs.push(Instr::Literal { len, mask });
            }
        }
    }
    Ok(DecodedProgram { width, instrs })
}

/// Joint register ⊗ auxiliary statevector simulation.
struct Machine {
    width: usize,
    aux_qubits: usize,
    amps: Vec<C64>,
}

impl Machine {
    fn new(width: usize, aux: Option<&PureState>) -> Result<Self> {
        let aux_dim = aux.map_or(1, |a| a.dim());
        if !aux_dim.is_power_of_two() || aux_dim > 1 << MAX_AUX_QUBITS {
            return Err(QkcError::InvalidState(format!(
                "auxiliary input dimension {} is not a power of two within {} qubits",
                aux_dim, MAX_AUX_QUBITS
            )));
        }
        let aux_qubits = aux_dim.trailing_zeros() as usize;
        let mut amps = vec![C64::new(0.0, 0.0); (1 << width) * aux_dim];
        match aux {
            Some(a) => amps[..aux_dim].copy_from_slice(a.amps()),
            None => amps[0] = C64::new(1.0, 0.0),
        }
        Ok(Self { width, aux_qubits, amps })
    }

    /// Flat-index bit position of register qubit `q` (qubit 0 is MSB).
    fn bit(&self, q: u8) -> usize {
        self.width - 1 - q as usize + self.aux_qubits
    }

    fn single_qubit(&mut self, q: u8, f: impl Fn(C64, C64) -> (C64, C64)) {
        let stride = 1usize << self.bit(q);
        for base in 0..self.amps.len() {
            if base & stride == 0 {
                let (a0, a1) = (self.amps[base], self.amps[base | stride]);
                let (b0, b1) = f(a0, a1);
                self.amps[base] = b0;
                self.amps[base | stride] = b1;
            }
        }
    }

    fn apply(&mut self, instr: Instr) -> Result<()> {
        match instr {
            Instr::H(q) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.single_qubit(q, |a0, a1| ((a0 + a1) * h, (a0 - a1) * h));
            }
            Instr::T(q) => {
                let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
                self.single_qubit(q, |a0, a1| (a0, a1 * phase));
            }
            Instr::S(q) => {
                let phase = C64::new(0.0, 1.0);
                self.single_qubit(q, |a0, a1| (a0, a1 * phase));
            }
            Instr::X(q) => self.single_qubit(q, |a0, a1| (a1, a0)),
            Instr::Cnot(control, target) => {
                let cbit = 1usize << self.bit(control);
                let tbit = 1usize << self.bit(target);
                for base in 0..self.amps.len() {
                    if base & cbit != 0 && base & tbit == 0 {
                        self.amps.swap(base, base | tbit);
                    }
                }
            }
            Instr::Literal { len, mask } => {
                // First payload bit on qubit 0: align the mask to the
                // register's most significant bits.
                let xor = (mask as usize) << (self.bit(len - 1));
                permute(&mut self.amps, |i| i ^ xor);
            }
            Instr::CopyAux => {
                if self.aux_qubits > self.width {
                    return Err(QkcError::WidthExceeded(format!(
                        "auxiliary register of {} qubits cannot swap into width {}",
                        self.aux_qubits, self.width
                    )));
                }
                if self.aux_qubits == 0 {
                    return Ok(());
                }
                // Register qubits 0..a sit in the top a flat bits, the aux
                // register in the low a bits; swap the two fields.
                let a = self.aux_qubits;
                let width = self.width;
                let field = (1usize << a) - 1;
                permute(&mut self.amps, |i| {
                    let aux = i & field;
                    let reg_top = (i >> width) & field;
                    (i & !(field << width) & !field) | (aux << width) | reg_top
                });
            }
        }
        Ok(())
    }

    /// Extracts the register state at halt; the register and auxiliary
    /// systems must be unentangled for the output to be a pure state.
    fn output(self) -> Result<PureState> {
        let reg_dim = 1usize << self.width;
        let aux_dim = 1usize << self.aux_qubits;
        if aux_dim == 1 {
            return Ok(PureState::new_unchecked(self.amps));
        }
        // Gram matrix of aux-indexed columns; purity of the aux reduction
        // equals purity of the register reduction.
        let mut gram = vec![C64::new(0.0, 0.0); aux_dim * aux_dim];
        for x in 0..aux_dim {
            for y in 0..aux_dim {
                let mut ip = C64::new(0.0, 0.0);
                for r in 0..reg_dim {
                    ip += self.amps[r * aux_dim + x].conj() * self.amps[r * aux_dim + y];
                }
                gram[x * aux_dim + y] = ip;
            }
        }
        let purity: f64 = (0..aux_dim)
            .map(|x| {
                (0..aux_dim)
                    .map(|y| (gram[x * aux_dim + y] * gram[y * aux_dim + x]).re)
                    .sum::<f64>()
            })
            .sum();
        if (purity - 1.0).abs() > ENTANGLEMENT_TOL {
            return Err(QkcError::EntangledOutput(1.0 - purity));
        }
        // Product state: any aux column with mass is proportional to the
        // register state.
        let best = (0..aux_dim)
            .max_by(|&x, &y| {
                gram[x * aux_dim + x].re.total_cmp(&gram[y * aux_dim + y].re)
            })
            .expect("aux_dim ≥ 2");
        let norm = gram[best * aux_dim + best].re.sqrt();
        let amps =
            (0..reg_dim).map(|r| self.amps[r * aux_dim + best] / norm).collect::<Vec<_>>();
        Ok(PureState::new_unchecked(amps))
    }
}

/// Applies an index permutation (an involution) to an amplitude vector.
fn permute(amps: &mut [C64], f: impl Fn(usize) -> usize) {
    for i in 0..amps.len() {
        let j = f(i);
        debug_assert_eq!(f(j), i);
        if j > i {
            amps.swap(i, j);
        }
    }
}

/// Decodes and runs a program, returning the declared register's state.
///
/// Identical `(program, aux)` always produces identical output: the gate
/// arithmetic is fixed-order binary floating point with no environment
/// dependence.
pub fn interpret(program: &Program, aux: Option<&PureState>) -> Result<PureState> {
    let decoded = decode(&program.bits, program.interpreter)?;
    run(&decoded, aux)
}

pub fn run(decoded: &DecodedProgram, aux: Option<&PureState>) -> Result<PureState> {
    let mut machine = Machine::new(decoded.width as usize, aux)?;
    for &instr in &decoded.instrs {
        machine.apply(instr)?;
    }
    machine.output()
}

/// Runs only programs whose instructions are all classical, on a plain bit
/// register; returns the output bits, or None for non-classical programs.
pub fn run_classical(decoded: &DecodedProgram) -> Option<Vec<bool>> {
    if !decoded.is_classical() {
        return None;
    }
    let w = decoded.width as usize;
    let mut bits = vec![false; w];
    for &instr in &decoded.instrs {
        match instr {
            Instr::X(q) => bits[q as usize] = !bits[q as usize],
            Instr::Cnot(c, t) => bits[t as usize] ^= bits[c as usize],
            Instr::Literal { len, mask } => {
                for q in 0..len {
                    if mask >> (len - 1 - q) & 1 == 1 {
                        bits[q as usize] = !bits[q as usize];
                    }
                }
            }
            Instr::CopyAux => {} // no auxiliary input in the classical model
            Instr::H(_) | Instr::T(_) | Instr::S(_) => unreachable!("filtered above"),
        }
    }
    Some(bits)
}

/// The width-w literal-loader program for classical bits `x` under A:
/// the constructive upper bound QC(x) ≤ |x| + 9.
pub fn literal_program(x: &[bool]) -> Result<Program> {
    if x.is_empty() || x.len() > MAX_REGISTER_QUBITS {
        return Err(QkcError::SizeLimit(format!(
            "literal payloads cover 1..={} bits, got {}",
            MAX_REGISTER_QUBITS,
            x.len()
        )));
    }
    let mut bits = BitString::from_value(x.len() as u64 - 1, 3); // width field
    bits.extend(&BitString::from_value(0b111, 3)); // A: RUN-LITERAL
    bits.extend(&BitString::from_value(x.len() as u64 - 1, 3));
    for &b in x {
        bits.push(b);
    }
    Ok(Program::new(bits, InterpreterId::A))
}
