#pragma once

#define LOSSPROP_VERSION "0.1.0"
