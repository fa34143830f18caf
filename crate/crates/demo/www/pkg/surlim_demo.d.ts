/* tslint:disable */
/* eslint-disable */

/**
 * Names of the bundled families and sequences.
 */
export function catalog(): string;

/**
 * The limit of a family given by name or as templates joined by `|`;
 * `variant` is `slim`, `diamond` or `star`.
 */
export function limit(family: string, variant: string): string;

/**
 * Rows `0..count` of a family, each with its first finite places spelled
 * out (`.` where the row has ended).
 */
export function matrix(family: string, count: number): string;

/**
 * Evaluates an ordinal expression to Cantor normal form.
 */
export function ordinal(expr: string): string;

/**
 * Checks a bundled rational sequence against its s-limit.
 */
export function verify(name: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly catalog: () => [number, number];
    readonly limit: (a: number, b: number, c: number, d: number) => [number, number];
    readonly matrix: (a: number, b: number, c: number) => [number, number];
    readonly ordinal: (a: number, b: number) => [number, number];
    readonly verify: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
