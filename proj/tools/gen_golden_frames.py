#!/usr/bin/env python3
"""Writes tests/golden/frames.hex from an encoder independent of the C++ code.

CRC-16/CCITT-FALSE comes from binascii.crc_hqx with init 0xFFFF.
"""
import binascii
import pathlib
import struct

TYPES = {
    "beacon": 0x01, "assoc_req": 0x02, "assoc_ack": 0x03, "data": 0x04, "data_ack": 0x05,
    "upload": 0x06, "decision": 0x07, "pump_cmd": 0x08, "pump_ack": 0x09,
}


def centi(v):
    return int(round(v * 100))


def reading(region, ts, temp, hum, moist):
    return struct.pack(">BIhHH", region, ts, centi(temp), centi(hum), centi(moist))


def frame(kind, seq, payload=b""):
    head = bytes([0x41, 0x47, 0x01, TYPES[kind]]) + struct.pack(">HH", seq, len(payload))
    body = head + payload
    return body + struct.pack(">H", binascii.crc_hqx(body, 0xFFFF))


FRAMES = [
    ("beacon", frame("beacon", 0)),
    ("assoc_req", frame("assoc_req", 1, bytes([1]))),
    ("assoc_ack", frame("assoc_ack", 1, struct.pack(">BHB", 1, 0, 3))),
    ("data", frame("data", 0, reading(1, 26, 34.86, 15.91, 30.6))),
    ("data_negative_temp", frame("data", 7, reading(2, 3600, -5.25, 100.0, 0.0))),
    ("data_ack", frame("data_ack", 0)),
    ("upload", frame("upload", 2, struct.pack(">H", 2)
                     + struct.pack(">H", 0) + reading(1, 26, 34.86, 15.91, 30.6)
                     + struct.pack(">H", 1) + reading(1, 27, 34.71, 17.55, 31.4))),
    ("upload_receipt", frame("data_ack", 2, struct.pack(">IHH", 28450, 2, 0))),
    ("decision", frame("decision", 3, struct.pack(">BBIHI", 1, 1, centi(585.0), 1, 28500))),
    ("pump_cmd_on", frame("pump_cmd", 4, struct.pack(">BBI", 1, 1, centi(585.0)))),
    ("pump_cmd_off", frame("pump_cmd", 5, struct.pack(">BBI", 2, 0, 0))),
    ("pump_ack", frame("pump_ack", 4, struct.pack(">BBI", 1, 1, centi(12.5)))),
]


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden" / "frames.hex"
    lines = ["# name hex  (generated by tools/gen_golden_frames.py)",
             "crc_check %04x" % binascii.crc_hqx(b"123456789", 0xFFFF)]
    lines += ["%s %s" % (name, data.hex()) for name, data in FRAMES]
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
