import { describe, expect, it } from 'vitest';
import {
  applyChannel,
  applyGate,
  denseEngine,
  exactExpectation,
  groundDensity,
  runDense,
  type CMat,
} from '../src/dense.js';
import type { Gate, RunRequest } from '../src/protocol.js';

function prepare(circuit: Gate[], n: number): CMat {
  let rho = groundDensity(n);
  for (const gate of circuit) {
    rho = applyGate(rho, gate, n);
  }
  return rho;
}

function trace(rho: CMat): number {
  let t = 0;
  for (let i = 0; i < rho.d; i += 1) {
    t += rho.re[i * rho.d + i];
  }
  return t;
}

const BELL: Gate[] = [['h', 0], ['cx', 0, 1]];

function request(partial: Partial<RunRequest>): RunRequest {
  return { circuit: [], noise: null, observable: 'ZZ', shots: 500, seed: 0, ...partial };
}

describe('state preparation', () => {
  it('measures the Bell state exactly', () => {
    const rho = prepare(BELL, 2);
    expect(exactExpectation(rho, 'ZZ')).toBeCloseTo(1, 12);
    expect(exactExpectation(rho, 'XX')).toBeCloseTo(1, 12);
    expect(exactExpectation(rho, 'YY')).toBeCloseTo(-1, 12);
    expect(exactExpectation(rho, 'ZI')).toBeCloseTo(0, 12);
    expect(exactExpectation(rho, 'XI')).toBeCloseTo(0, 12);
  });

  it('puts qubit 0 on the most significant bit', () => {
    // h on qubit 0 of two: |+0>, so X on slot 0 reads +1 and slot 1 stays Z-up.
    const rho = prepare([['h', 0]], 2);
    expect(exactExpectation(rho, 'XI')).toBeCloseTo(1, 12);
    expect(exactExpectation(rho, 'IZ')).toBeCloseTo(1, 12);
    expect(rho.re[0]).toBeCloseTo(0.5, 12); // |00>
    expect(rho.re[2 * 4 + 2]).toBeCloseTo(0.5, 12); // |10>
  });

  it('builds a Y eigenstate from h then s', () => {
    const rho = prepare([['h', 0], ['s', 0]], 1);
    expect(exactExpectation(rho, 'Y')).toBeCloseTo(1, 12);
  });

  it('x flips Z', () => {
    const rho = prepare([['x', 0]], 1);
    expect(exactExpectation(rho, 'Z')).toBeCloseTo(-1, 12);
  });

  it('keeps the trace at one through gates', () => {
    const rho = prepare([...BELL, ['s', 1], ['x', 0], ['h', 1]], 2);
    expect(trace(rho)).toBeCloseTo(1, 12);
  });
});

describe('channels', () => {
  it('depolarizing mixes toward I/2: <Z> = 1 - p', () => {
    const rho = applyChannel(groundDensity(1), 'depolarizing', 0.2, 0, 1);
    expect(exactExpectation(rho, 'Z')).toBeCloseTo(0.8, 12);
    expect(trace(rho)).toBeCloseTo(1, 12);
  });

  it('amplitude damping relaxes |1>: <Z> = 2g - 1', () => {
    const rho = applyChannel(prepare([['x', 0]], 1), 'amplitude_damping', 0.3, 0, 1);
    expect(exactExpectation(rho, 'Z')).toBeCloseTo(-0.4, 12);
  });

  it('amplitude damping leaves |0> alone', () => {
    const rho = applyChannel(groundDensity(1), 'amplitude_damping', 0.3, 0, 1);
    expect(exactExpectation(rho, 'Z')).toBeCloseTo(1, 12);
  });

  it('phase damping shrinks coherence: <X> = sqrt(1 - l)', () => {
    const rho = applyChannel(prepare([['h', 0]], 1), 'phase_damping', 0.36, 0, 1);
    expect(exactExpectation(rho, 'X')).toBeCloseTo(0.8, 12);
    expect(exactExpectation(rho, 'Z')).toBeCloseTo(0, 12);
  });

  it('identity is a fixed point', () => {
    const before = prepare(BELL, 2);
    const after = applyChannel(before, 'identity', 0, 0, 2);
    for (let k = 0; k < before.re.length; k += 1) {
      expect(after.re[k]).toBeCloseTo(before.re[k], 14);
      expect(after.im[k]).toBeCloseTo(before.im[k], 14);
    }
  });

  it('touches only the addressed qubit', () => {
    // Damp qubit 1 of |11>; qubit 0 must stay flipped.
    const rho = applyChannel(prepare([['x', 0], ['x', 1]], 2), 'amplitude_damping', 1.0, 1, 2);
    expect(exactExpectation(rho, 'ZI')).toBeCloseTo(-1, 12);
    expect(exactExpectation(rho, 'IZ')).toBeCloseTo(1, 12);
  });
});

describe('runDense', () => {
  it('returns exactly 1 for noiseless Bell ZZ', () => {
    expect(runDense(request({ circuit: BELL }))).toBe(1);
  });

  it('is deterministic in the seed', () => {
    const req = request({
      circuit: BELL,
      noise: { channel: 'depolarizing', parameter: 0.1, qubits: [0, 1] },
      observable: 'XX',
      seed: 77,
    });
    expect(runDense(req)).toBe(runDense(req));
  });

  it('varies across seeds', () => {
    const values = new Set<string>();
    for (let seed = 0; seed < 5; seed += 1) {
      const cells = ['ZI', 'XI', 'XX'].map((observable) =>
        runDense(request({ circuit: BELL, observable, shots: 400, seed })),
      );
      values.add(cells.join(','));
    }
    expect(values.size).toBeGreaterThan(1);
  });

  it('converges on the damped expectation', () => {
    const req = request({
      circuit: [['x', 0]],
      noise: { channel: 'amplitude_damping', parameter: 0.25, qubits: [0] },
      observable: 'Z',
      shots: 20000,
      seed: 3,
    });
    // Exact value is 2g - 1 = -0.5; 5 sigma at 20000 shots is ~0.031.
    expect(Math.abs(runDense(req) - -0.5)).toBeLessThan(0.035);
  });

  it('noise on a spectator qubit leaves a Z cell clean', () => {
    const req = request({
      circuit: [['x', 1]],
      noise: { channel: 'phase_damping', parameter: 0.9, qubits: [0, 1] },
      observable: 'IZ',
      shots: 500,
      seed: 9,
    });
    expect(runDense(req)).toBe(-1);
  });
});

describe('engine declaration', () => {
  it('declares the full vocabulary', () => {
    expect(denseEngine.gates).toEqual(['h', 'x', 's', 'sdg', 'cx']);
    expect(denseEngine.channels).toContain('depolarizing');
    expect(denseEngine.channels).toContain('amplitude_damping');
    expect(denseEngine.channels).toContain('phase_damping');
    expect(denseEngine.channels).toContain('identity');
  });
});
