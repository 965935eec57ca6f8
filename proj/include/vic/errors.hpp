#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace vic {

/// Coarse error classes; the CLI maps them to exit codes.
enum class ErrorClass { Io, Config, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string kind, const std::string& what)
        : std::runtime_error(what), cls_(cls), kind_(std::move(kind)) {}

    ErrorClass errorClass() const noexcept { return cls_; }
    /// Stable machine-readable name, e.g. "OrderTooHigh".
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorClass cls_;
    std::string kind_;
};

#define VIC_DEFINE_ERROR(Name, Class)                                            \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(ErrorClass::Class, #Name, what) {} \
    };

VIC_DEFINE_ERROR(IoError, Io)
VIC_DEFINE_ERROR(DegenerateImage, Io)
VIC_DEFINE_ERROR(ConfigError, Config)
VIC_DEFINE_ERROR(OrderTooHigh, Config)
VIC_DEFINE_ERROR(BasisIndexError, Config)
VIC_DEFINE_ERROR(DomainError, Numeric)
VIC_DEFINE_ERROR(MeshTooLarge, Numeric)
VIC_DEFINE_ERROR(OverlapError, Numeric)
VIC_DEFINE_ERROR(IllConditioned, Numeric)
VIC_DEFINE_ERROR(NoDescent, Numeric)
VIC_DEFINE_ERROR(SeedError, Numeric)
VIC_DEFINE_ERROR(InitRankError, Numeric)
VIC_DEFINE_ERROR(OracleDivergence, Numeric)
VIC_DEFINE_ERROR(RenderBounds, Numeric)

#undef VIC_DEFINE_ERROR

/// Raised when the bicubic support of a sample point leaves the image.
class OutOfBounds : public Error {
public:
    OutOfBounds(const Eigen::Vector2d& where, const std::string& what)
        : Error(ErrorClass::Numeric, "OutOfBounds", what), where_(where) {}

    const Eigen::Vector2d& where() const noexcept { return where_; }

private:
    Eigen::Vector2d where_;
};

}  // namespace vic
