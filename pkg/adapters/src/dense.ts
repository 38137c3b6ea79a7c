/**
 * densim: a dense density-matrix engine.
 *
 * The register state is a full 2^n x 2^n complex matrix.  Gates act by
 * conjugation, channels act as Kraus sums, and a run request applies its
 * noise channel once to every listed qubit after the state is prepared
 * (a preparation-error model).  Depolarizing here mixes the state toward
 * the maximally mixed state: rho -> (1 - p) rho + p I/2.
 *
 * Measurement rotates the observable into the Z basis and samples basis
 * outcomes from the diagonal, which is exact up to shot noise.
 */

import { AdapterError, type Engine, type Gate, type RunRequest } from './protocol.js';
import { measurementRotation, paritySign, qubitMask, supportSlots } from './pauli.js';
import { sampleCdf, seededRng } from './rng.js';

export interface CMat {
  d: number;
  re: Float64Array;
  im: Float64Array;
}

function cmat(d: number): CMat {
  return { d, re: new Float64Array(d * d), im: new Float64Array(d * d) };
}

function m2(entries: number[][]): CMat {
  // Four [re, im] pairs in row-major order.
  const m = cmat(2);
  for (let k = 0; k < 4; k += 1) {
    m.re[k] = entries[k][0];
    m.im[k] = entries[k][1];
  }
  return m;
}

const R = Math.SQRT1_2;
const I2 = m2([[1, 0], [0, 0], [0, 0], [1, 0]]);
const H2 = m2([[R, 0], [R, 0], [R, 0], [-R, 0]]);
const X2 = m2([[0, 0], [1, 0], [1, 0], [0, 0]]);
const Y2 = m2([[0, 0], [0, -1], [0, 1], [0, 0]]);
const Z2 = m2([[1, 0], [0, 0], [0, 0], [-1, 0]]);
const S2 = m2([[1, 0], [0, 0], [0, 0], [0, 1]]);
const SDG2 = m2([[1, 0], [0, 0], [0, 0], [0, -1]]);

const SINGLE_GATES: Record<string, CMat> = { h: H2, x: X2, s: S2, sdg: SDG2 };
const PAULIS: Record<string, CMat> = { I: I2, X: X2, Y: Y2, Z: Z2 };

export function eye(d: number): CMat {
  const m = cmat(d);
  for (let i = 0; i < d; i += 1) {
    m.re[i * d + i] = 1;
  }
  return m;
}

function scale(a: CMat, s: number): CMat {
  const out = cmat(a.d);
  for (let k = 0; k < a.re.length; k += 1) {
    out.re[k] = a.re[k] * s;
    out.im[k] = a.im[k] * s;
  }
  return out;
}

export function matmul(a: CMat, b: CMat): CMat {
  const d = a.d;
  const out = cmat(d);
  for (let r = 0; r < d; r += 1) {
    for (let k = 0; k < d; k += 1) {
      const ar = a.re[r * d + k];
      const ai = a.im[r * d + k];
      if (ar === 0 && ai === 0) {
        continue;
      }
      for (let c = 0; c < d; c += 1) {
        const br = b.re[k * d + c];
        const bi = b.im[k * d + c];
        out.re[r * d + c] += ar * br - ai * bi;
        out.im[r * d + c] += ar * bi + ai * br;
      }
    }
  }
  return out;
}

export function dagger(a: CMat): CMat {
  const d = a.d;
  const out = cmat(d);
  for (let r = 0; r < d; r += 1) {
    for (let c = 0; c < d; c += 1) {
      out.re[c * d + r] = a.re[r * d + c];
      out.im[c * d + r] = -a.im[r * d + c];
    }
  }
  return out;
}

export function kron(a: CMat, b: CMat): CMat {
  const d = a.d * b.d;
  const out = cmat(d);
  for (let ar = 0; ar < a.d; ar += 1) {
    for (let ac = 0; ac < a.d; ac += 1) {
      const xr = a.re[ar * a.d + ac];
      const xi = a.im[ar * a.d + ac];
      if (xr === 0 && xi === 0) {
        continue;
      }
      for (let br = 0; br < b.d; br += 1) {
        for (let bc = 0; bc < b.d; bc += 1) {
          const yr = b.re[br * b.d + bc];
          const yi = b.im[br * b.d + bc];
          const idx = (ar * b.d + br) * d + (ac * b.d + bc);
          out.re[idx] = xr * yr - xi * yi;
          out.im[idx] = xr * yi + xi * yr;
        }
      }
    }
  }
  return out;
}

function embedSingle(u: CMat, qubit: number, numQubits: number): CMat {
  let acc: CMat = { d: 1, re: Float64Array.of(1), im: Float64Array.of(0) };
  for (let q = 0; q < numQubits; q += 1) {
    acc = kron(acc, q === qubit ? u : I2);
  }
  return acc;
}

function cxMatrix(control: number, target: number, numQubits: number): CMat {
  const d = 1 << numQubits;
  const cMask = qubitMask(control, numQubits);
  const tMask = qubitMask(target, numQubits);
  const out = cmat(d);
  for (let col = 0; col < d; col += 1) {
    const row = col & cMask ? col ^ tMask : col;
    out.re[row * d + col] = 1;
  }
  return out;
}

function gateOperator(gate: Gate, numQubits: number): CMat {
  const [name, ...qubits] = gate;
  if (name === 'cx') {
    return cxMatrix(qubits[0], qubits[1], numQubits);
  }
  const u = SINGLE_GATES[name];
  if (u === undefined) {
    throw new AdapterError('unknown_gate', `densim has no gate "${name}"`);
  }
  return embedSingle(u, qubits[0], numQubits);
}

export function groundDensity(numQubits: number): CMat {
  const rho = cmat(1 << numQubits);
  rho.re[0] = 1;
  return rho;
}

export function applyGate(rho: CMat, gate: Gate, numQubits: number): CMat {
  const u = gateOperator(gate, numQubits);
  return matmul(matmul(u, rho), dagger(u));
}

function krausSet(channel: string, parameter: number): CMat[] {
  const p = parameter;
  switch (channel) {
    case 'identity':
      return [I2];
    case 'depolarizing':
      return [
        scale(I2, Math.sqrt(1 - (3 * p) / 4)),
        scale(X2, Math.sqrt(p / 4)),
        scale(Y2, Math.sqrt(p / 4)),
        scale(Z2, Math.sqrt(p / 4)),
      ];
    case 'amplitude_damping':
      return [
        m2([[1, 0], [0, 0], [0, 0], [Math.sqrt(1 - p), 0]]),
        m2([[0, 0], [Math.sqrt(p), 0], [0, 0], [0, 0]]),
      ];
    case 'phase_damping':
      return [
        m2([[1, 0], [0, 0], [0, 0], [Math.sqrt(1 - p), 0]]),
        m2([[0, 0], [0, 0], [0, 0], [Math.sqrt(p), 0]]),
      ];
    default:
      throw new AdapterError('unknown_channel', `densim has no channel "${channel}"`);
  }
}

export function applyChannel(
  rho: CMat,
  channel: string,
  parameter: number,
  qubit: number,
  numQubits: number,
): CMat {
  const out = cmat(rho.d);
  for (const k of krausSet(channel, parameter)) {
    const op = embedSingle(k, qubit, numQubits);
    const term = matmul(matmul(op, rho), dagger(op));
    for (let i = 0; i < out.re.length; i += 1) {
      out.re[i] += term.re[i];
      out.im[i] += term.im[i];
    }
  }
  return out;
}

/** Re tr(rho P) for a Pauli label; the exact value the sampler converges to. */
export function exactExpectation(rho: CMat, observable: string): number {
  let p: CMat = { d: 1, re: Float64Array.of(1), im: Float64Array.of(0) };
  for (const symbol of observable) {
    p = kron(p, PAULIS[symbol]);
  }
  const d = rho.d;
  let trace = 0;
  for (let r = 0; r < d; r += 1) {
    for (let c = 0; c < d; c += 1) {
      trace += rho.re[r * d + c] * p.re[c * d + r] - rho.im[r * d + c] * p.im[c * d + r];
    }
  }
  return trace;
}

export function runDense(request: RunRequest): number {
  const n = request.observable.length;
  let rho = groundDensity(n);
  for (const gate of request.circuit) {
    rho = applyGate(rho, gate, n);
  }
  if (request.noise !== null) {
    for (const q of request.noise.qubits) {
      rho = applyChannel(rho, request.noise.channel, request.noise.parameter, q, n);
    }
  }
  for (const gate of measurementRotation(request.observable)) {
    rho = applyGate(rho, gate, n);
  }

  const d = rho.d;
  const cdf = new Float64Array(d);
  let total = 0;
  for (let i = 0; i < d; i += 1) {
    total += Math.max(rho.re[i * d + i], 0); // clamp roundoff dust
    cdf[i] = total;
  }

  const slots = supportSlots(request.observable);
  const rng = seededRng(request.seed);
  let sum = 0;
  for (let shot = 0; shot < request.shots; shot += 1) {
    sum += paritySign(sampleCdf(cdf, rng), slots, n);
  }
  return sum / request.shots;
}

export const denseEngine: Engine = {
  name: 'densim',
  version: '1.4.2',
  maxQubits: 6,
  gates: ['h', 'x', 's', 'sdg', 'cx'],
  channels: ['identity', 'depolarizing', 'amplitude_damping', 'phase_damping'],
  run: runDense,
};
