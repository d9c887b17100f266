public class SSLProperties {

    public SSLProperties() {
    }
}
