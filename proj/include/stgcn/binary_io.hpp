#pragma once

// Little-endian stream helpers for the binary file formats. Values are
// assembled byte by byte, so the encoding is the same on any host.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stgcn::io_detail {

inline void put_bytes(std::ostream& out, std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16(std::ostream& out, std::uint16_t v) { put_bytes(out, v, 2); }
inline void put_u32(std::ostream& out, std::uint32_t v) { put_bytes(out, v, 4); }
inline void put_f64(std::ostream& out, double v) {
    put_bytes(out, std::bit_cast<std::uint64_t>(v), 8);
}

inline std::uint64_t get_bytes(std::istream& in, int n, const char* what) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
        int c = in.get();
        if (c == EOF)
            throw std::runtime_error(std::string("truncated file while reading ") + what);
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}
inline std::uint16_t get_u16(std::istream& in, const char* what) {
    return static_cast<std::uint16_t>(get_bytes(in, 2, what));
}
inline std::uint32_t get_u32(std::istream& in, const char* what) {
    return static_cast<std::uint32_t>(get_bytes(in, 4, what));
}
inline double get_f64(std::istream& in, const char* what) {
    return std::bit_cast<double>(get_bytes(in, 8, what));
}
inline std::string get_string(std::istream& in, std::size_t len, const char* what) {
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in.gcount()) != len)
        throw std::runtime_error(std::string("truncated file while reading ") + what);
    return s;
}

// Guards element counts against dimension products that overflow or that
// no realistic file could hold.
inline std::size_t checked_element_count(const std::vector<int>& shape, const char* what) {
    std::uint64_t n = 1;
    for (int d : shape) {
        if (d < 0) throw std::runtime_error(std::string(what) + ": negative dimension");
        n *= static_cast<std::uint64_t>(d);
        if (n > (1ull << 32)) throw std::runtime_error(std::string(what) + ": shape overflow");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace stgcn::io_detail
