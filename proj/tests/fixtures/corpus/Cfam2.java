package fixture.network;

public class Cfam2 {
  public FloatingIp deleteFloatingIp(NetworkApi api, String addressKey) {
    FloatingIp address = api.allocate(addressKey);
    address.attach();
    api.register(addressKey);
    api.refresh(addressKey);
    api.notify(addressKey);
    LOG.info("successfully deleted floating ip");
    return address;
  }
}
