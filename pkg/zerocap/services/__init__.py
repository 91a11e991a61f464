# zerocap/services
