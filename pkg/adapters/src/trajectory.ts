/**
 * trajsim: a stochastic trajectory engine.
 *
 * Every shot is an independent statevector run.  After each gate, each
 * touched qubit that sits in the noise list may take a quantum jump: a
 * depolarizing event applies one of X, Y, Z uniformly with probability p,
 * damping events apply the appropriate jump operator and renormalise.
 * Ensemble-averaged, the jumps reproduce the Kraus channels exactly, but
 * any single run is one concrete history (a gate-error model).
 *
 * Note the depolarizing convention differs from engines that mix toward
 * I/2: with probability p the state suffers a definite Pauli error, so a
 * Z eigenstate decays as 1 - 4p/3 rather than 1 - p.
 */

import type { Engine, Gate, NoiseSpec, RunRequest } from './protocol.js';
import { measurementRotation, paritySign, qubitMask, supportSlots } from './pauli.js';
import { sampleCdf, seededRng } from './rng.js';

export interface SVec {
  n: number;
  re: Float64Array;
  im: Float64Array;
}

export function zeroState(n: number): SVec {
  const size = 1 << n;
  const re = new Float64Array(size);
  re[0] = 1;
  return { n, re, im: new Float64Array(size) };
}

// Row-major 2x2 complex matrix: [re00, im00, re01, im01, re10, im10, re11, im11].
type Mat2 = Float64Array;

const R = Math.SQRT1_2;
const MAT_H = Float64Array.of(R, 0, R, 0, R, 0, -R, 0);
const MAT_X = Float64Array.of(0, 0, 1, 0, 1, 0, 0, 0);
const MAT_Y = Float64Array.of(0, 0, 0, -1, 0, 1, 0, 0);
const MAT_Z = Float64Array.of(1, 0, 0, 0, 0, 0, -1, 0);
const MAT_S = Float64Array.of(1, 0, 0, 0, 0, 0, 0, 1);
const MAT_SDG = Float64Array.of(1, 0, 0, 0, 0, 0, 0, -1);

const SINGLE_GATES: Record<string, Mat2> = { h: MAT_H, x: MAT_X, s: MAT_S, sdg: MAT_SDG };
const PAULI_JUMPS = [MAT_X, MAT_Y, MAT_Z];

function applyMat2(psi: SVec, target: number, m: Mat2): void {
  const mask = qubitMask(target, psi.n);
  const { re, im } = psi;
  for (let i = 0; i < re.length; i += 1) {
    if (i & mask) {
      continue;
    }
    const j = i | mask;
    const ar = re[i];
    const ai = im[i];
    const br = re[j];
    const bi = im[j];
    re[i] = m[0] * ar - m[1] * ai + m[2] * br - m[3] * bi;
    im[i] = m[0] * ai + m[1] * ar + m[2] * bi + m[3] * br;
    re[j] = m[4] * ar - m[5] * ai + m[6] * br - m[7] * bi;
    im[j] = m[4] * ai + m[5] * ar + m[6] * bi + m[7] * br;
  }
}

function applyCx(psi: SVec, control: number, target: number): void {
  const cMask = qubitMask(control, psi.n);
  const tMask = qubitMask(target, psi.n);
  const { re, im } = psi;
  for (let i = 0; i < re.length; i += 1) {
    if ((i & cMask) === 0 || i & tMask) {
      continue;
    }
    const j = i | tMask;
    const tr = re[i];
    const ti = im[i];
    re[i] = re[j];
    im[i] = im[j];
    re[j] = tr;
    im[j] = ti;
  }
}

export function applyGate(psi: SVec, gate: Gate): void {
  const [name, ...qubits] = gate;
  if (name === 'cx') {
    applyCx(psi, qubits[0], qubits[1]);
  } else {
    applyMat2(psi, qubits[0], SINGLE_GATES[name]);
  }
}

function occupation(psi: SVec, mask: number): number {
  let p1 = 0;
  for (let i = 0; i < psi.re.length; i += 1) {
    if (i & mask) {
      p1 += psi.re[i] * psi.re[i] + psi.im[i] * psi.im[i];
    }
  }
  return p1;
}

function scaleAll(psi: SVec, s: number): void {
  for (let i = 0; i < psi.re.length; i += 1) {
    psi.re[i] *= s;
    psi.im[i] *= s;
  }
}

/** One possible quantum jump on `qubit`, decided by the shot's RNG. */
export function maybeJump(
  psi: SVec,
  channel: string,
  parameter: number,
  qubit: number,
  rng: () => number,
): void {
  if (channel === 'identity' || parameter === 0) {
    return;
  }
  const mask = qubitMask(qubit, psi.n);

  if (channel === 'depolarizing') {
    if (rng() < parameter) {
      const which = Math.min(2, Math.floor(rng() * 3));
      applyMat2(psi, qubit, PAULI_JUMPS[which]);
    }
    return;
  }

  const p1 = occupation(psi, mask);
  const pJump = parameter * p1;
  const { re, im } = psi;

  if (channel === 'amplitude_damping') {
    if (rng() < pJump) {
      // Decay: every excited amplitude drops to the ground slot.  The
      // surviving state has norm sqrt(p1) before renormalisation.
      const s = Math.sqrt(p1);
      for (let i = 0; i < re.length; i += 1) {
        if (i & mask) {
          const j = i ^ mask;
          re[j] = re[i] / s;
          im[j] = im[i] / s;
          re[i] = 0;
          im[i] = 0;
        }
      }
    } else {
      const keep = Math.sqrt(1 - parameter);
      for (let i = 0; i < re.length; i += 1) {
        if (i & mask) {
          re[i] *= keep;
          im[i] *= keep;
        }
      }
      scaleAll(psi, 1 / Math.sqrt(1 - pJump));
    }
    return;
  }

  if (channel === 'phase_damping') {
    if (rng() < pJump) {
      // The environment learned the qubit is excited; project onto |1>.
      const s = Math.sqrt(p1);
      for (let i = 0; i < re.length; i += 1) {
        if ((i & mask) === 0) {
          re[i] = 0;
          im[i] = 0;
        } else {
          re[i] /= s;
          im[i] /= s;
        }
      }
    } else {
      const keep = Math.sqrt(1 - parameter);
      for (let i = 0; i < re.length; i += 1) {
        if (i & mask) {
          re[i] *= keep;
          im[i] *= keep;
        }
      }
      scaleAll(psi, 1 / Math.sqrt(1 - pJump));
    }
  }
}

function sampleIndex(psi: SVec, cdf: Float64Array, rng: () => number): number {
  let total = 0;
  for (let i = 0; i < psi.re.length; i += 1) {
    total += psi.re[i] * psi.re[i] + psi.im[i] * psi.im[i];
    cdf[i] = total;
  }
  return sampleCdf(cdf, rng);
}

export function runTrajectory(request: RunRequest): number {
  const n = request.observable.length;
  const slots = supportSlots(request.observable);
  const rotation = measurementRotation(request.observable);
  const noise: NoiseSpec | null =
    request.noise !== null && request.noise.channel !== 'identity' ? request.noise : null;
  const rng = seededRng(request.seed);
  const cdf = new Float64Array(1 << n);

  let sum = 0;
  for (let shot = 0; shot < request.shots; shot += 1) {
    const psi = zeroState(n);
    for (const gate of request.circuit) {
      applyGate(psi, gate);
      if (noise !== null) {
        for (const q of gate.slice(1) as number[]) {
          if (noise.qubits.includes(q)) {
            maybeJump(psi, noise.channel, noise.parameter, q, rng);
          }
        }
      }
    }
    for (const gate of rotation) {
      applyGate(psi, gate);
    }
    sum += paritySign(sampleIndex(psi, cdf, rng), slots, n);
  }
  return sum / request.shots;
}

export const trajectoryEngine: Engine = {
  name: 'trajsim',
  version: '0.7.0',
  maxQubits: 10,
  gates: ['h', 'x', 's', 'sdg', 'cx'],
  channels: ['identity', 'depolarizing', 'amplitude_damping', 'phase_damping'],
  run: runTrajectory,
};
