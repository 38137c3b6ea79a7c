/**
 * Bridge protocol plumbing shared by both adapters.
 *
 * The host drives us over stdin/stdout with newline-delimited UTF-8 JSON,
 * one request per line, one response per request, strictly in order:
 *
 *   {"id": 1, "op": "hello"}
 *   {"id": 2, "op": "run", "circuit": [["h", 0], ["cx", 0, 1]],
 *    "noise": {"channel": "depolarizing", "parameter": 0.05, "qubits": [0, 1]},
 *    "observable": "XX", "shots": 500, "seed": 12345}
 *   {"id": 3, "op": "shutdown"}
 *
 * Failures are answered as {"id", "error": {"code", "message"}}.  A line
 * that does not parse, or parses to something without an integer id, gets
 * no response at all: we cannot address a reply to it, and an unaddressed
 * reply would desynchronise the host's request/response pairing.  Such
 * lines are logged to stderr and dropped.
 */

import { createInterface } from 'node:readline';
import { performance } from 'node:perf_hooks';

export type Gate = [string, ...number[]];

export interface NoiseSpec {
  channel: string;
  parameter: number;
  qubits: number[];
}

export interface RunRequest {
  circuit: Gate[];
  noise: NoiseSpec | null;
  observable: string;
  shots: number;
  seed: number;
}

export interface Engine {
  name: string;
  version: string;
  maxQubits: number;
  gates: readonly string[];
  channels: readonly string[];
  run(request: RunRequest): number;
}

export class AdapterError extends Error {
  constructor(
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'AdapterError';
  }
}

const MAX_SEED = Number.MAX_SAFE_INTEGER; // 2^53 - 1, the wire seed cap

function isInt(value: unknown): value is number {
  return typeof value === 'number' && Number.isSafeInteger(value);
}

function badRequest(message: string): AdapterError {
  return new AdapterError('bad_request', message);
}

/** Validate one run request against the engine's capabilities. */
export function parseRunRequest(message: Record<string, unknown>, engine: Engine): RunRequest {
  const observable = message.observable;
  if (typeof observable !== 'string' || !/^[IXYZ]+$/.test(observable)) {
    throw badRequest(`observable must be a string over IXYZ, got ${JSON.stringify(observable)}`);
  }
  const numQubits = observable.length;
  if (numQubits > engine.maxQubits) {
    throw new AdapterError(
      'unsupported',
      `${engine.name} handles at most ${engine.maxQubits} qubits, observable has ${numQubits}`,
    );
  }

  const rawCircuit = message.circuit;
  if (!Array.isArray(rawCircuit)) {
    throw badRequest('circuit must be an array of gates');
  }
  const circuit: Gate[] = [];
  for (const entry of rawCircuit) {
    if (!Array.isArray(entry) || typeof entry[0] !== 'string') {
      throw badRequest(`malformed gate ${JSON.stringify(entry)}`);
    }
    const [name, ...qubits] = entry as [string, ...unknown[]];
    if (!engine.gates.includes(name)) {
      throw new AdapterError('unknown_gate', `${engine.name} has no gate "${name}"`);
    }
    const arity = name === 'cx' ? 2 : 1;
    if (qubits.length !== arity) {
      throw badRequest(`gate "${name}" takes ${arity} qubit(s), got ${qubits.length}`);
    }
    for (const q of qubits) {
      if (!isInt(q) || q < 0 || q >= numQubits) {
        throw badRequest(`qubit index ${JSON.stringify(q)} out of range for ${numQubits} qubits`);
      }
    }
    if (arity === 2 && qubits[0] === qubits[1]) {
      throw badRequest('cx control and target must differ');
    }
    circuit.push([name, ...(qubits as number[])]);
  }

  let noise: NoiseSpec | null = null;
  const rawNoise = message.noise;
  if (rawNoise !== null && rawNoise !== undefined) {
    if (typeof rawNoise !== 'object' || Array.isArray(rawNoise)) {
      throw badRequest('noise must be null or an object');
    }
    const spec = rawNoise as Record<string, unknown>;
    const channel = spec.channel;
    if (typeof channel !== 'string') {
      throw badRequest('noise.channel must be a string');
    }
    if (!engine.channels.includes(channel)) {
      throw new AdapterError('unknown_channel', `${engine.name} has no channel "${channel}"`);
    }
    const parameter = spec.parameter;
    if (typeof parameter !== 'number' || !Number.isFinite(parameter) || parameter < 0 || parameter > 1) {
      throw badRequest(`noise.parameter must be in [0, 1], got ${JSON.stringify(parameter)}`);
    }
    const qubits = spec.qubits;
    if (!Array.isArray(qubits) || qubits.some((q) => !isInt(q) || q < 0 || q >= numQubits)) {
      throw badRequest('noise.qubits must be qubit indices within the register');
    }
    if (new Set(qubits).size !== qubits.length) {
      throw badRequest('noise.qubits contains duplicates');
    }
    noise = { channel, parameter, qubits: qubits as number[] };
  }

  const shots = message.shots;
  if (!isInt(shots) || shots < 1) {
    throw badRequest(`shots must be a positive integer, got ${JSON.stringify(shots)}`);
  }
  const seed = message.seed;
  if (!isInt(seed) || seed < 0 || seed > MAX_SEED) {
    throw badRequest(`seed must be an integer in [0, 2^53), got ${JSON.stringify(seed)}`);
  }

  return { circuit, noise, observable, shots, seed };
}

function reply(payload: Record<string, unknown>, andThen?: () => void): void {
  process.stdout.write(JSON.stringify(payload) + '\n', andThen);
}

export function serve(engine: Engine): void {
  const rl = createInterface({ input: process.stdin, terminal: false });
  let shuttingDown = false;

  rl.on('line', (line: string) => {
    const trimmed = line.trim();
    if (!trimmed) {
      return;
    }
    let message: unknown;
    try {
      message = JSON.parse(trimmed);
    } catch {
      process.stderr.write(`${engine.name}: dropping unparseable line: ${trimmed.slice(0, 120)}\n`);
      return;
    }
    if (typeof message !== 'object' || message === null || Array.isArray(message)) {
      process.stderr.write(`${engine.name}: dropping non-object request\n`);
      return;
    }
    const request = message as Record<string, unknown>;
    const id = request.id;
    if (!isInt(id)) {
      process.stderr.write(`${engine.name}: dropping request without integer id\n`);
      return;
    }

    try {
      switch (request.op) {
        case 'hello':
          reply({
            id,
            name: engine.name,
            version: engine.version,
            capabilities: {
              gates: [...engine.gates],
              channels: [...engine.channels],
              max_qubits: engine.maxQubits,
            },
          });
          break;
        case 'run': {
          const parsed = parseRunRequest(request, engine);
          const started = performance.now();
          const expectation = engine.run(parsed);
          reply({
            id,
            expectation,
            shots_used: parsed.shots,
            wall_time_ms: performance.now() - started,
          });
          break;
        }
        case 'shutdown':
          // Exit only once the acknowledgement has flushed; the timer is a
          // backstop for a host that has already closed its read end.
          shuttingDown = true;
          reply({ id, ok: true }, () => process.exit(0));
          setTimeout(() => process.exit(0), 500);
          break;
        default:
          reply({
            id,
            error: { code: 'unknown_op', message: `unknown op ${JSON.stringify(request.op)}` },
          });
      }
    } catch (err) {
      if (err instanceof AdapterError) {
        reply({ id, error: { code: err.code, message: err.message } });
      } else {
        reply({ id, error: { code: 'internal', message: String(err) } });
      }
    }
  });

  // Host closed our stdin without a shutdown request; nothing left to serve.
  rl.on('close', () => {
    if (!shuttingDown) {
      process.exit(0);
    }
  });
}
