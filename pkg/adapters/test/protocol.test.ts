import { spawn, type ChildProcessWithoutNullStreams } from 'node:child_process';
import { createInterface } from 'node:readline';
import { existsSync } from 'node:fs';
import { fileURLToPath } from 'node:url';
import { afterEach, describe, expect, it } from 'vitest';
import { AdapterError, parseRunRequest, type Engine } from '../src/protocol.js';
import { denseEngine } from '../src/dense.js';

const DENSIM = fileURLToPath(new URL('../dist/densim.js', import.meta.url));
const TRAJSIM = fileURLToPath(new URL('../dist/trajsim.js', import.meta.url));

function runPayload(overrides: Record<string, unknown> = {}): Record<string, unknown> {
  return {
    circuit: [['h', 0], ['cx', 0, 1]],
    noise: null,
    observable: 'ZZ',
    shots: 500,
    seed: 1,
    ...overrides,
  };
}

describe('parseRunRequest', () => {
  const engine: Engine = denseEngine;

  function expectCode(payload: Record<string, unknown>, code: string) {
    try {
      parseRunRequest(payload, engine);
    } catch (err) {
      expect(err).toBeInstanceOf(AdapterError);
      expect((err as AdapterError).code).toBe(code);
      return;
    }
    throw new Error(`expected code ${code}, but the request was accepted`);
  }

  it('accepts a well-formed request', () => {
    const req = parseRunRequest(runPayload(), engine);
    expect(req.circuit).toEqual([['h', 0], ['cx', 0, 1]]);
    expect(req.noise).toBeNull();
    expect(req.shots).toBe(500);
  });

  it('accepts a noise spec and a missing noise field alike', () => {
    const noise = { channel: 'depolarizing', parameter: 0.05, qubits: [0, 1] };
    expect(parseRunRequest(runPayload({ noise }), engine).noise).toEqual(noise);
    const bare = runPayload();
    delete bare.noise;
    expect(parseRunRequest(bare, engine).noise).toBeNull();
  });

  it('flags unknown gates and channels with their own codes', () => {
    expectCode(runPayload({ circuit: [['bogus', 0]] }), 'unknown_gate');
    expectCode(
      runPayload({ noise: { channel: 'thermal', parameter: 0.1, qubits: [0] } }),
      'unknown_channel',
    );
  });

  it('rejects malformed observables', () => {
    expectCode(runPayload({ observable: 'zz' }), 'bad_request');
    expectCode(runPayload({ observable: 'ZQ' }), 'bad_request');
    expectCode(runPayload({ observable: '' }), 'bad_request');
    expectCode(runPayload({ observable: 7 }), 'bad_request');
    expectCode(runPayload({ circuit: [], observable: 'Z'.repeat(engine.maxQubits + 1) }), 'unsupported');
  });

  it('rejects gate shape problems', () => {
    expectCode(runPayload({ circuit: [['h']] }), 'bad_request');
    expectCode(runPayload({ circuit: [['h', 0, 1]] }), 'bad_request');
    expectCode(runPayload({ circuit: [['cx', 1, 1]] }), 'bad_request');
    expectCode(runPayload({ circuit: [['h', 5]] }), 'bad_request');
    expectCode(runPayload({ circuit: [['h', 0.5]] }), 'bad_request');
    expectCode(runPayload({ circuit: 'h 0' }), 'bad_request');
  });

  it('rejects bad noise specs', () => {
    expectCode(
      runPayload({ noise: { channel: 'depolarizing', parameter: 1.5, qubits: [0] } }),
      'bad_request',
    );
    expectCode(
      runPayload({ noise: { channel: 'depolarizing', parameter: 0.1, qubits: [0, 0] } }),
      'bad_request',
    );
    expectCode(
      runPayload({ noise: { channel: 'depolarizing', parameter: 0.1, qubits: [4] } }),
      'bad_request',
    );
  });

  it('rejects bad shots and seeds', () => {
    expectCode(runPayload({ shots: 0 }), 'bad_request');
    expectCode(runPayload({ shots: 2.5 }), 'bad_request');
    expectCode(runPayload({ shots: 'exact' }), 'bad_request');
    expectCode(runPayload({ seed: -1 }), 'bad_request');
    expectCode(runPayload({ seed: 2 ** 53 }), 'bad_request');
  });
});

/** Line-oriented driver for a spawned adapter. */
class Harness {
  private child: ChildProcessWithoutNullStreams;
  private pending: Array<(line: string) => void> = [];
  private backlog: string[] = [];
  private nextId = 0;
  readonly exited: Promise<number | null>;

  constructor(script: string) {
    if (!existsSync(script)) {
      throw new Error(`${script} missing; run "npm run build" first`);
    }
    this.child = spawn(process.execPath, [script], { stdio: ['pipe', 'pipe', 'pipe'] });
    createInterface({ input: this.child.stdout }).on('line', (line) => {
      const waiter = this.pending.shift();
      if (waiter) {
        waiter(line);
      } else {
        this.backlog.push(line);
      }
    });
    this.exited = new Promise((resolve) => this.child.on('exit', resolve));
  }

  sendRaw(line: string): void {
    this.child.stdin.write(line + '\n');
  }

  send(payload: Record<string, unknown>): number {
    this.nextId += 1;
    this.sendRaw(JSON.stringify({ id: this.nextId, ...payload }));
    return this.nextId;
  }

  nextLine(timeoutMs = 5000): Promise<string> {
    const queued = this.backlog.shift();
    if (queued !== undefined) {
      return Promise.resolve(queued);
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error('no adapter response')), timeoutMs);
      this.pending.push((line) => {
        clearTimeout(timer);
        resolve(line);
      });
    });
  }

  async request(payload: Record<string, unknown>): Promise<Record<string, unknown>> {
    const id = this.send(payload);
    const reply = JSON.parse(await this.nextLine()) as Record<string, unknown>;
    expect(reply.id).toBe(id);
    return reply;
  }

  closeStdin(): void {
    this.child.stdin.end();
  }

  kill(): void {
    this.child.kill();
  }
}

for (const [label, script] of [
  ['densim', DENSIM],
  ['trajsim', TRAJSIM],
] as const) {
  describe(`${label} over the wire`, () => {
    let harness: Harness;

    afterEach(() => {
      harness?.kill();
    });

    it('completes a full session', async () => {
      harness = new Harness(script);

      const hello = await harness.request({ op: 'hello' });
      expect(hello.name).toBe(label);
      expect(typeof hello.version).toBe('string');
      const caps = hello.capabilities as Record<string, unknown>;
      expect(caps.gates).toEqual(['h', 'x', 's', 'sdg', 'cx']);
      expect(caps.channels).toContain('phase_damping');

      const run = await harness.request({ op: 'run', ...runPayload() });
      expect(run.expectation).toBe(1); // noiseless Bell ZZ
      expect(run.shots_used).toBe(500);
      expect(run.wall_time_ms).toBeGreaterThanOrEqual(0);

      const bye = await harness.request({ op: 'shutdown' });
      expect(bye.ok).toBe(true);
      expect(await harness.exited).toBe(0);
    });

    it('repeats a seeded run bit-for-bit', async () => {
      harness = new Harness(script);
      const payload = runPayload({
        noise: { channel: 'depolarizing', parameter: 0.05, qubits: [0, 1] },
        observable: 'XX',
        seed: 99,
      });
      const first = await harness.request({ op: 'run', ...payload });
      const second = await harness.request({ op: 'run', ...payload });
      expect(second.expectation).toBe(first.expectation);
    });

    it('answers errors in band and keeps serving', async () => {
      harness = new Harness(script);

      const bad = await harness.request({ op: 'run', ...runPayload({ circuit: [['rz', 0]] }) });
      const err = bad.error as Record<string, unknown>;
      expect(err.code).toBe('unknown_gate');
      expect(typeof err.message).toBe('string');

      const unknownOp = await harness.request({ op: 'reset' });
      expect((unknownOp.error as Record<string, unknown>).code).toBe('unknown_op');

      const good = await harness.request({ op: 'run', ...runPayload() });
      expect(good.expectation).toBe(1);
    });

    it('drops garbage lines and id-less requests without replying', async () => {
      harness = new Harness(script);

      harness.sendRaw('this is not json');
      harness.sendRaw('{"op": "run"}'); // parseable, but nothing to address
      const reply = await harness.request({ op: 'run', ...runPayload() });
      // The single reply matches the only addressable request.
      expect(reply.expectation).toBe(1);
    });

    it('exits cleanly when stdin closes without a shutdown', async () => {
      harness = new Harness(script);
      await harness.request({ op: 'hello' });
      harness.closeStdin();
      expect(await harness.exited).toBe(0);
    });
  });
}
