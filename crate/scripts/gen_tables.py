#!/usr/bin/env python3
"""Generate the byte classification tables in crates/urlkit/src/tables.rs.

The WHATWG URL code point lists are inlined below as data so the generated
tables can be audited against the standard. Regenerate with:

    python3 scripts/gen_tables.py > crates/urlkit/src/tables.rs
"""

# Forbidden host code points: U+0000 NULL, U+0009 TAB, U+000A LF, U+000D CR,
# U+0020 SPACE, U+0023 (#), U+002F (/), U+003A (:), U+003C (<), U+003E (>),
# U+003F (?), U+0040 (@), U+005B ([), U+005C (\), U+005D (]), U+005E (^),
# U+007C (|).
FORBIDDEN_HOST = {0x00, 0x09, 0x0A, 0x0D, 0x20, 0x23, 0x2F, 0x3A, 0x3C, 0x3E,
                  0x3F, 0x40, 0x5B, 0x5C, 0x5D, 0x5E, 0x7C}

# Forbidden domain code points: forbidden host code points, C0 controls,
# U+0025 (%) and U+007F DELETE.
FORBIDDEN_DOMAIN = FORBIDDEN_HOST | set(range(0x00, 0x20)) | {0x25, 0x7F}

# C0 control percent-encode set: C0 controls and all code points > U+007E.
C0_CONTROL = set(range(0x00, 0x20)) | set(range(0x7F, 0x100))

# Fragment percent-encode set: C0 control set, SPACE, ", <, >, `.
FRAGMENT = C0_CONTROL | {0x20, 0x22, 0x3C, 0x3E, 0x60}

# Query percent-encode set: C0 control set, SPACE, ", #, <, >.
QUERY = C0_CONTROL | {0x20, 0x22, 0x23, 0x3C, 0x3E}

# Special-query percent-encode set: query set and '.
SPECIAL_QUERY = QUERY | {0x27}

# Path percent-encode set: query set and ?, `, {, }.
PATH = QUERY | {0x3F, 0x60, 0x7B, 0x7D}

# Userinfo percent-encode set: path set and /, :, ;, =, @, [, \, ], ^, |.
USERINFO = PATH | {0x2F, 0x3A, 0x3B, 0x3D, 0x40, 0x5B, 0x5C, 0x5D, 0x5E, 0x7C}

# Component percent-encode set: userinfo set and $, %, &, +, ,.
COMPONENT = USERINFO | {0x24, 0x25, 0x26, 0x2B, 0x2C}


def host_class(b):
    # 1 = forces the slow host path (forbidden domain code point, %, or any
    # byte >= 0x80 which needs punycode handling), 2 = ASCII upper, 0 = valid.
    if b in FORBIDDEN_DOMAIN or b >= 0x80:
        return 1
    if 0x41 <= b <= 0x5A:
        return 2
    return 0


def path_sig(b):
    # bit 0: needs percent-encoding in a path, bit 1: backslash,
    # bit 2: dot, bit 3: percent.
    mask = 0
    if b in PATH:
        mask |= 1
    if b == 0x5C:
        mask |= 2
    if b == 0x2E:
        mask |= 4
    if b == 0x25:
        mask |= 8
    return mask


def emit(name, values, doc):
    print(f"/// {doc}")
    print(f"pub(crate) static {name}: [u8; 256] = [")
    for row in range(0, 256, 16):
        cells = ", ".join(str(values[i]) for i in range(row, row + 16))
        print(f"    {cells},")
    print("];")
    print()


def main():
    print("// Generated by scripts/gen_tables.py. Do not edit by hand.")
    print()
    emit("HOST_CLASS", [host_class(b) for b in range(256)],
         "Host byte classes: 0 valid lowercase, 1 forces slow path, 2 ASCII upper.")
    emit("FORBIDDEN_HOST", [1 if b in FORBIDDEN_HOST else 0 for b in range(256)],
         "Forbidden host code points (opaque-host rejection list).")
    emit("PATH_SIG", [path_sig(b) for b in range(256)],
         "Path signature bits: 1 encode, 2 backslash, 4 dot, 8 percent.")
    for name, s in [("C0_CONTROL", C0_CONTROL), ("FRAGMENT", FRAGMENT),
                    ("QUERY", QUERY), ("SPECIAL_QUERY", SPECIAL_QUERY),
                    ("PATH", PATH), ("USERINFO", USERINFO),
                    ("COMPONENT", COMPONENT)]:
        emit(f"{name}_SET", [1 if b in s else 0 for b in range(256)],
             f"{name.replace('_', '-').lower()} percent-encode set membership.")


if __name__ == "__main__":
    main()
