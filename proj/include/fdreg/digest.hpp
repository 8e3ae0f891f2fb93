#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace fdreg {

/// FNV-1a 64-bit running hash; used for config digests and design hashes.
class Digest {
public:
    Digest& bytes(const void* data, size_t n) {
        auto p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    Digest& str(std::string_view s) { return bytes(s.data(), s.size()); }
    Digest& f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        return bytes(&bits, sizeof bits);
    }
    Digest& i64(int64_t v) { return bytes(&v, sizeof v); }
    Digest& vec(const Eigen::Ref<const Eigen::VectorXd>& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
        return *this;
    }
    Digest& mat(const Eigen::Ref<const Eigen::MatrixXd>& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) f64(m(i, j));
        return *this;
    }

    uint64_t value() const { return state_; }
    std::string hex() const {
        static const char* d = "0123456789abcdef";
        std::string out(16, '0');
        uint64_t v = state_;
        for (int i = 15; i >= 0; --i, v >>= 4) out[i] = d[v & 0xF];
        return out;
    }

private:
    uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string digest_hex(std::string_view s) { return Digest().str(s).hex(); }

}  // namespace fdreg
