# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluator for lowered operator programs and table iteration.

Opcode numbers must match ``bid.lowering``; a test checks the two tables.
"""
from libc.stdint cimport int64_t, uint64_t, INT64_MAX
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef enum:
    K_CONST = 0
    K_REG
    K_ADD
    K_MUL
    K_MONUS
    K_PAIR
    K_EXP
    K_BINLEN
    K_MEM
    K_EQ
    K_LE
    K_LT
    K_NOT
    K_AND
    K_OR
    K_IMP
    K_IFF
    K_EX_LE
    K_EX_LT
    K_ALL_LE
    K_ALL_LT

OPCODES = {
    "CONST": K_CONST, "REG": K_REG, "ADD": K_ADD, "MUL": K_MUL,
    "MONUS": K_MONUS, "PAIR": K_PAIR, "EXP": K_EXP, "BINLEN": K_BINLEN,
    "MEM": K_MEM, "EQ": K_EQ, "LE": K_LE, "LT": K_LT, "NOT": K_NOT,
    "AND": K_AND, "OR": K_OR, "IMP": K_IMP, "IFF": K_IFF,
    "EX_LE": K_EX_LE, "EX_LT": K_EX_LT, "ALL_LE": K_ALL_LE, "ALL_LT": K_ALL_LT,
}

cdef enum:
    E_OVERFLOW = 1
    E_BUDGET = 2


cdef struct Ctx:
    const int64_t* ops
    const int64_t* a
    const int64_t* b
    const int64_t* c
    int64_t* regs
    const unsigned char* sbuf
    const int64_t* soff
    const int64_t* slen
    int64_t budget
    int err


cdef inline int64_t bitlen(int64_t x) nogil:
    cdef int64_t n = 0
    while x:
        x >>= 1
        n += 1
    return n


cdef inline int64_t add_ck(Ctx* ctx, int64_t x, int64_t y) nogil:
    if x > INT64_MAX - y:
        ctx.err = E_OVERFLOW
        return 0
    return x + y


cdef inline int64_t mul_ck(Ctx* ctx, int64_t x, int64_t y) nogil:
    if y != 0 and x > INT64_MAX / y:
        ctx.err = E_OVERFLOW
        return 0
    return x * y


cdef int64_t ev(Ctx* ctx, int64_t k) nogil:
    cdef int64_t op = ctx.ops[k]
    cdef int64_t x, y, s, top, v, count
    cdef int want
    if ctx.err:
        return 0
    if op == K_CONST:
        return ctx.a[k]
    if op == K_REG:
        return ctx.regs[ctx.a[k]]
    if op == K_NOT:
        return not ev(ctx, ctx.a[k])
    if op == K_BINLEN:
        return bitlen(ev(ctx, ctx.a[k]))
    if op == K_MEM:
        y = ev(ctx, ctx.b[k])
        x = ctx.a[k]
        if y >= ctx.slen[x]:
            return 0
        return (ctx.sbuf[ctx.soff[x] + (y >> 3)] >> (y & 7)) & 1
    if op == K_AND:
        return ev(ctx, ctx.a[k]) and ev(ctx, ctx.b[k])
    if op == K_OR:
        return ev(ctx, ctx.a[k]) or ev(ctx, ctx.b[k])
    if op == K_IMP:
        return (not ev(ctx, ctx.a[k])) or ev(ctx, ctx.b[k])
    if op == K_IFF:
        x = ev(ctx, ctx.a[k]) != 0
        y = ev(ctx, ctx.b[k]) != 0
        return x == y
    if op >= K_EX_LE:
        top = ev(ctx, ctx.b[k])
        if ctx.err:
            return 0
        count = top if (op == K_EX_LT or op == K_ALL_LT) else top + 1
        if count > ctx.budget:
            ctx.err = E_BUDGET
            return 0
        want = op == K_EX_LE or op == K_EX_LT
        for v in range(count):
            ctx.regs[ctx.a[k]] = v
            if (ev(ctx, ctx.c[k]) != 0) == want:
                return want
            if ctx.err:
                return 0
        return not want
    x = ev(ctx, ctx.a[k])
    y = ev(ctx, ctx.b[k])
    if op == K_ADD:
        return add_ck(ctx, x, y)
    if op == K_MUL:
        return mul_ck(ctx, x, y)
    if op == K_MONUS:
        return x - y if x > y else 0
    if op == K_PAIR:
        s = add_ck(ctx, x, y)
        s = mul_ck(ctx, s, add_ck(ctx, s, 1))
        return add_ck(ctx, s, mul_ck(ctx, 2, y))
    if op == K_EXP:
        if x >= bitlen(y):
            return y
        return min(<int64_t>1 << x, y)
    if op == K_EQ:
        return x == y
    if op == K_LE:
        return x <= y
    if op == K_LT:
        return x < y
    return 0


class KernelOverflow(Exception):
    """A register left the int64 range; the caller reruns on Python ints."""


class KernelBudget(Exception):
    pass


def eval_bits(const int64_t[:] ops, const int64_t[:] a, const int64_t[:] b,
              const int64_t[:] c, int64_t root, list regs, list strs,
              int64_t width, int64_t budget):
    """Bits 0..width-1 of the program's root as a Python int."""
    cdef int64_t n_regs = len(regs), n_strs = len(strs), i, total = 0
    cdef Ctx ctx
    for v in regs:
        if v > INT64_MAX:
            raise KernelOverflow()
    packed = []
    offs = []
    lens = []
    for s in strs:
        nb = (s.bit_length() + 7) // 8
        offs.append(total)
        lens.append(s.bit_length())
        packed.append(s.to_bytes(nb, "little"))
        total += nb
    cdef bytes sbytes = b"".join(packed) + b"\0"
    cdef int64_t* reg_arr = <int64_t*>malloc((n_regs + 1) * sizeof(int64_t))
    cdef int64_t* off_arr = <int64_t*>malloc((n_strs + 1) * sizeof(int64_t))
    cdef int64_t* len_arr = <int64_t*>malloc((n_strs + 1) * sizeof(int64_t))
    cdef unsigned char* out = <unsigned char*>malloc(width // 8 + 1)
    try:
        for i in range(n_regs):
            reg_arr[i] = regs[i]
        for i in range(n_strs):
            off_arr[i] = offs[i]
            len_arr[i] = lens[i]
        memset(out, 0, width // 8 + 1)
        ctx.ops = &ops[0]
        ctx.a = &a[0]
        ctx.b = &b[0]
        ctx.c = &c[0]
        ctx.regs = reg_arr
        ctx.sbuf = sbytes
        ctx.soff = off_arr
        ctx.slen = len_arr
        ctx.budget = budget
        ctx.err = 0
        with nogil:
            for i in range(width):
                reg_arr[0] = i
                if ev(&ctx, root):
                    out[i >> 3] |= 1 << (i & 7)
                if ctx.err:
                    break
        if ctx.err == E_OVERFLOW:
            raise KernelOverflow()
        if ctx.err == E_BUDGET:
            raise KernelBudget()
        return int.from_bytes(out[:width // 8 + 1], "little")
    finally:
        free(reg_arr)
        free(off_arr)
        free(len_arr)
        free(out)


def table_iterate(const uint64_t[:] table, uint64_t start, int64_t n):
    """n-fold application of a precomputed successor table."""
    cdef uint64_t s = start
    cdef int64_t j
    with nogil:
        for j in range(n):
            s = table[s]
    return s


def table_period(const uint64_t[:] table, uint64_t start):
    """(u, v, state_at_u): first index u and period v of the orbit of start."""
    cdef int64_t size = table.shape[0], j = 0
    cdef int64_t* seen = <int64_t*>malloc(size * sizeof(int64_t))
    cdef uint64_t s = start
    if seen == NULL:
        raise MemoryError()
    try:
        with nogil:
            for j in range(size):
                seen[j] = -1
            j = 0
            while seen[s] < 0:
                seen[s] = j
                s = table[s]
                j += 1
        return seen[s], j - seen[s], s
    finally:
        free(seen)


def lanes_to_planes(list values, int64_t width):
    """Transpose: plane p has bit t set iff values[t] has bit p set."""
    cdef int64_t n = len(values), nb = (n + 7) // 8, t, p, k, chunks
    cdef uint64_t w
    cdef bytearray buf = bytearray(nb * width if width > 0 else 0)
    cdef unsigned char* out = buf
    cdef object mask64 = (1 << 64) - 1
    chunks = (width + 63) // 64
    for t in range(n):
        v = values[t]
        for k in range(chunks):
            if not v:
                break
            w = v & mask64 if chunks > 1 else v
            v = v >> 64
            p = k * 64
            while w and p < width:
                if w & 1:
                    out[p * nb + (t >> 3)] |= 1 << (t & 7)
                w >>= 1
                p += 1
    return [int.from_bytes(buf[p * nb:(p + 1) * nb], "little") for p in range(width)]
