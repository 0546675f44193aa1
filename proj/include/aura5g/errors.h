#ifndef AURA5G_ERRORS_H
#define AURA5G_ERRORS_H

#include <stdexcept>
#include <string>

namespace aura5g
{

#define AURA5G_ERROR(Name)                                                                         \
    class Name : public std::runtime_error                                                         \
    {                                                                                              \
      public:                                                                                      \
        explicit Name(const std::string& what)                                                     \
            : std::runtime_error(what)                                                             \
        {                                                                                          \
        }                                                                                          \
    }

AURA5G_ERROR(AreaTooSmall);
AURA5G_ERROR(ResampleLimit);
AURA5G_ERROR(DomainError);
AURA5G_ERROR(InconsistentInput);
AURA5G_ERROR(UnknownCode);
AURA5G_ERROR(InvalidKnob);
AURA5G_ERROR(InvalidSpec);
AURA5G_ERROR(UndefinedMetric);
AURA5G_ERROR(AdapterUnavailable);
AURA5G_ERROR(ParseError);
AURA5G_ERROR(IoError);

#undef AURA5G_ERROR

} // namespace aura5g

#endif
