/* tslint:disable */
/* eslint-disable */

/**
 * Von Neumann entropy along a trajectory.
 */
export function entropy_trajectory(raising: boolean, seed: number, steps: number, dt: number): string;

/**
 * Noiseless fringe with its shape metrics.
 */
export function fringe_curve(gamma_t: number, eshift_t: number, points: number): string;

/**
 * Seeded noisy scan and its least-squares fit.
 */
export function noisy_fit(gamma_t: number, eshift_t: number, sigma: number, points: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly entropy_trajectory: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly fringe_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly noisy_fit: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
