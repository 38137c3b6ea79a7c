// Measurement bookkeeping shared by both engines.
//
// Qubit 0 is the leftmost character of an observable label and the
// most-significant bit of a computational basis index, so the bit of
// qubit q in index i is (i >> (n - 1 - q)) & 1.

import type { Gate } from './protocol.js';

/** Indices of the non-identity slots of a Pauli label. */
export function supportSlots(observable: string): number[] {
  const slots: number[] = [];
  for (let q = 0; q < observable.length; q += 1) {
    if (observable[q] !== 'I') {
      slots.push(q);
    }
  }
  return slots;
}

/**
 * Gates that turn Z-basis measurement into measurement of `observable`:
 * H for an X slot, S-dagger then H for a Y slot, nothing for Z or I.
 */
export function measurementRotation(observable: string): Gate[] {
  const gates: Gate[] = [];
  for (let q = 0; q < observable.length; q += 1) {
    if (observable[q] === 'X') {
      gates.push(['h', q]);
    } else if (observable[q] === 'Y') {
      gates.push(['sdg', q], ['h', q]);
    }
  }
  return gates;
}

/** The +-1 eigenvalue of the rotated observable for one basis outcome. */
export function paritySign(basisIndex: number, slots: number[], numQubits: number): number {
  let sign = 1;
  for (const q of slots) {
    if ((basisIndex >> (numQubits - 1 - q)) & 1) {
      sign = -sign;
    }
  }
  return sign;
}

export function qubitMask(qubit: number, numQubits: number): number {
  return 1 << (numQubits - 1 - qubit);
}
